"""Plain ``key = value`` documents describing a target number.

Example (the real cube root of 2)::

    kind = algebraic
    coefficients = -2 0 0 1
    interval = 1 2

Other kinds: ``rational`` (``value = 3/2``), ``continued_fraction`` with
``stream = finite|periodic|fibonacci`` (keys ``quotients``,
``preperiod``/``period``, ``a``/``b``, optional ``integer_part``), and
``complex`` whose parts use ``re.``/``im.`` prefixed keys.
"""

from __future__ import annotations

from fractions import Fraction

from .targets import (
    AlgebraicReal,
    ComplexRect,
    ContinuedFraction,
    FibonacciWord,
    FiniteQuotients,
    PeriodicQuotients,
    Rational,
    XiSpec,
)


class ConfigError(ValueError):
    pass


def parse_pairs(text: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(t) for t in s.replace(",", " ").split())


def _from_pairs(kv: dict[str, str], prefix: str = "") -> XiSpec:
    def get(key, default=None):
        v = kv.get(prefix + key, default)
        if v is None:
            raise ConfigError(f"missing key {prefix + key!r}")
        return v

    kind = get("kind")
    try:
        if kind == "rational":
            return Rational(Fraction(get("value")))
        if kind == "algebraic":
            lo, hi = (Fraction(t) for t in get("interval").replace(",", " ").split())
            return AlgebraicReal(_ints(get("coefficients")), lo, hi)
        if kind == "continued_fraction":
            a0 = int(get("integer_part", "0"))
            stream = get("stream")
            if stream == "finite":
                return ContinuedFraction(FiniteQuotients(_ints(get("quotients"))), a0)
            if stream == "periodic":
                return ContinuedFraction(
                    PeriodicQuotients(_ints(get("preperiod", "")), _ints(get("period"))), a0
                )
            if stream == "fibonacci":
                return ContinuedFraction(FibonacciWord(int(get("a")), int(get("b"))), a0)
            raise ConfigError(f"unknown stream {stream!r}")
        if kind == "complex":
            if prefix:
                raise ConfigError("nested complex targets are not allowed")
            return ComplexRect(_from_pairs(kv, "re."), _from_pairs(kv, "im."))
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown kind {kind!r}")


def parse_xi(text: str) -> XiSpec:
    return _from_pairs(parse_pairs(text))


def load_xi(path) -> XiSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_xi(fh.read())


def _pairs_of(xi: XiSpec, prefix: str = "") -> list[tuple[str, str]]:
    j = " ".join
    if isinstance(xi, Rational):
        return [(prefix + "kind", "rational"), (prefix + "value", str(xi.value))]
    if isinstance(xi, AlgebraicReal):
        return [
            (prefix + "kind", "algebraic"),
            (prefix + "coefficients", j(map(str, xi.coefficients))),
            (prefix + "interval", f"{xi.lo} {xi.hi}"),
        ]
    if isinstance(xi, ContinuedFraction):
        out = [(prefix + "kind", "continued_fraction"), (prefix + "integer_part", str(xi.integer_part))]
        s = xi.stream
        if isinstance(s, FiniteQuotients):
            out += [(prefix + "stream", "finite"), (prefix + "quotients", j(map(str, s.terms)))]
        elif isinstance(s, PeriodicQuotients):
            out += [
                (prefix + "stream", "periodic"),
                (prefix + "preperiod", j(map(str, s.preperiod))),
                (prefix + "period", j(map(str, s.period))),
            ]
        else:
            out += [(prefix + "stream", "fibonacci"), (prefix + "a", str(s.a)), (prefix + "b", str(s.b))]
        return out
    if isinstance(xi, ComplexRect):
        return [(prefix + "kind", "complex")] + _pairs_of(xi.re, "re.") + _pairs_of(xi.im, "im.")
    raise TypeError(f"not a target spec: {xi!r}")


def dump_xi(xi: XiSpec) -> str:
    """Canonical text form; ``parse_xi(dump_xi(x)) == x``."""
    return "".join(f"{k} = {v}\n" for k, v in _pairs_of(xi))
