"""The auxiliary inequalities of the criterion as executable checks.

Each check returns a :class:`BoundReport` holding both sides of the
inequality.  Sides are exact whenever the target allows it (rational
targets, surd coefficients) and certified enclosures otherwise.  A report is
``verified`` only when ``lhs < rhs`` is resolved or ``lhs == rhs`` is exact.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterator

from .certreal.enclosure import (
    DEFAULT_CAP,
    Enclosure,
    enclosure_to_json,
)
from .certreal.evaluator import Target, as_rational_target, target_of
from .certreal.surd import GAMMA, QuadSurd
from .polyring import Poly, det3, exact_quotient, gcd_z, height, resultant

VERIFIED = "verified"
VIOLATED = "violated"
INCONCLUSIVE = "inconclusive"


class CmnTable:
    """The constants c(m, n); note c(1, 2) = 3 but c(2, 1) = 1."""

    _values = {(1, 1): 1, (1, 2): 3, (2, 1): 1, (2, 2): 6}

    def __call__(self, m: int, n: int) -> int:
        try:
            return self._values[(m, n)]
        except KeyError:
            raise ValueError(f"c(m, n) is defined only for m, n in {{1, 2}}, got ({m}, {n})") from None

    def items(self):
        return self._values.items()


C_MN = CmnTable()


@dataclass(frozen=True)
class NotApplicable:
    reason: str


@dataclass(frozen=True)
class BoundReport:
    lemma: int
    lhs: Enclosure
    rhs: Enclosure
    status: str
    inputs: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def slack(self) -> Enclosure:
        return self.rhs - self.lhs

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    def to_json(self) -> dict:
        row = {
            "lemma": self.lemma,
            "inputs": self.inputs,
            "lhs": enclosure_to_json(self.lhs),
            "rhs": enclosure_to_json(self.rhs),
            "slack": enclosure_to_json(self.slack),
            "status": self.status,
        }
        row.update({k: enclosure_to_json(v) if isinstance(v, Enclosure) else v for k, v in self.extra.items()})
        return row


def _decide(lhs_fn, rhs_fn, cap: int) -> tuple[str, Enclosure, Enclosure]:
    """Resolve ``lhs <= rhs`` with escalating precision."""
    bits = 64
    while True:
        lhs, rhs = Enclosure._coerce(lhs_fn(bits)), Enclosure._coerce(rhs_fn(bits))
        if lhs.hi < rhs.lo:
            return VERIFIED, lhs, rhs
        if lhs.lo > rhs.hi:
            return VIOLATED, lhs, rhs
        if lhs.is_point and rhs.is_point:  # exact equality
            return VERIFIED, lhs, rhs
        if bits >= cap:
            return INCONCLUSIVE, lhs, rhs
        bits = min(2 * bits, cap)


def _poly(p) -> Poly:
    p = p if isinstance(p, Poly) else Poly(p)
    if p.is_zero:
        raise ValueError("zero polynomial")
    return p


def _target(xi) -> Target:
    if isinstance(xi, (int, Fraction)):
        return as_rational_target(Fraction(xi))
    return target_of(xi)


def _xi_text(t: Target) -> str:
    return str(t.exact_value) if t.kind == "rational" else repr(t.xi)


def _surd_enc(x, bits: int) -> Enclosure:
    return x.enclosure(bits) if isinstance(x, QuadSurd) else Enclosure.point(x)


# height sandwich ------------------------------------------------------------


def check_gelfond(L, M) -> tuple[Any, Any, Any]:
    """``(H(L)H(M)/gamma, H(LM), 2H(L)H(M))`` in exact (surd) arithmetic.

    Coefficients may be integers, fractions or :class:`QuadSurd` values.
    """
    L, M = _poly(L), _poly(M)
    if L.degree > 1 or M.degree > 1:
        raise ValueError("degree at most 1 expected")
    hh = height(L) * height(M)
    return QuadSurd._lift(hh) / GAMMA, height(L * M), 2 * hh


def gelfond_report(L, M) -> BoundReport:
    lower, mid, upper = check_gelfond(L, M)
    ok = QuadSurd._lift(lower) <= QuadSurd._lift(mid) and QuadSurd._lift(mid) <= QuadSurd._lift(upper)
    bits = 96
    lo_slack = QuadSurd._lift(mid) - QuadSurd._lift(lower)
    return BoundReport(
        lemma=1,
        lhs=_surd_enc(mid, bits),
        rhs=_surd_enc(upper, bits),
        status=VERIFIED if ok else VIOLATED,
        inputs={"L": _coeff_text(L), "M": _coeff_text(M)},
        extra={"lower": _surd_enc(lower, bits), "lower_slack": _surd_enc(lo_slack, bits)},
    )


def _coeff_text(p) -> str:
    return " ".join(str(c) for c in _poly(p).coeffs)


# resultant bound -------------------------------------------------------------


def resultant_bound(P, Q, m: int, n: int, xi, cap: int = DEFAULT_CAP) -> BoundReport:
    P, Q = _poly(P), _poly(Q)
    if P.degree > m or Q.degree > n:
        raise ValueError("degree exceeds the nominal degree")
    t = _target(xi)
    hp, hq = height(P), height(Q)
    lhs = abs(resultant(P, Q, m, n))
    a = C_MN(m, n) * hp ** (n - 1) * hq ** m
    b = C_MN(n, m) * hp**n * hq ** (m - 1)
    status, l_enc, r_enc = _decide(
        lambda bits: lhs, lambda bits: a * t.abs_value(P, bits) + b * t.abs_value(Q, bits), cap
    )
    return BoundReport(
        lemma=2,
        lhs=l_enc,
        rhs=r_enc,
        status=status,
        inputs={"P": P.to_text(), "Q": Q.to_text(), "m": m, "n": n, "xi": _xi_text(t)},
    )


# common factor ---------------------------------------------------------------


def common_factor_bound(P, Q, xi, cap: int = DEFAULT_CAP) -> BoundReport | NotApplicable:
    """Applies only when ``gcd(P, Q)`` has degree exactly 1 and is neither P nor Q."""
    P, Q = _poly(P), _poly(Q)
    if P.degree > 2 or Q.degree > 2:
        raise ValueError("degree at most 2 expected")
    L = gcd_z(P, Q)
    if L.degree != 1:
        return NotApplicable(f"gcd has degree {L.degree}")
    if exact_quotient(P, L).degree == 0 or exact_quotient(Q, L).degree == 0:
        return NotApplicable("gcd equals one of the inputs up to a constant")
    t = _target(xi)
    hl, hp, hq = height(L), height(P), height(Q)

    def rhs(bits):
        return GAMMA.enclosure(bits) * (hp * t.abs_value(Q, bits) + hq * t.abs_value(P, bits))

    status, l_enc, r_enc = _decide(lambda bits: hl * t.abs_value(L, bits), rhs, cap)
    return BoundReport(
        lemma=3,
        lhs=l_enc,
        rhs=r_enc,
        status=status,
        inputs={"P": P.to_text(), "Q": Q.to_text(), "L": L.to_text(), "xi": _xi_text(t)},
    )


# determinant bound -----------------------------------------------------------


def det_bound(P, Q, R, xi, cap: int = DEFAULT_CAP) -> BoundReport:
    P, Q, R = _poly(P), _poly(Q), _poly(R)
    if max(P.degree, Q.degree, R.degree) > 2:
        raise ValueError("degree at most 2 expected")
    t = _target(xi)
    hp, hq, hr = height(P), height(Q), height(R)
    lhs = abs(det3(P, Q, R))

    def rhs(bits):
        return 2 * (
            hq * hr * t.abs_value(P, bits) + hp * hr * t.abs_value(Q, bits) + hp * hq * t.abs_value(R, bits)
        )

    status, l_enc, r_enc = _decide(lambda bits: lhs, rhs, cap)
    return BoundReport(
        lemma=4,
        lhs=l_enc,
        rhs=r_enc,
        status=status,
        inputs={"P": P.to_text(), "Q": Q.to_text(), "R": R.to_text(), "xi": _xi_text(t)},
    )


# seeded random suites ------------------------------------------------------------

DYADIC_BITS = 16


def _rng(seed: int, lemma: int, cell: str, k: int) -> random.Random:
    # one generator per instance: reproducible and independent of evaluation order
    return random.Random(f"{seed}:{lemma}:{cell}:{k}")


def _dyadic(rng: random.Random) -> Fraction:
    d = 1 << DYADIC_BITS
    return Fraction(rng.randint(-2 * d, 2 * d), d)


def _int_poly(rng: random.Random, deg: int, bound: int) -> Poly:
    while True:
        p = Poly(rng.randint(-bound, bound) for _ in range(deg + 1))
        if not p.is_zero:
            return p


def _rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _instance(lemma: int, cell: str, k: int, seed: int, bound: int):
    rng = _rng(seed, lemma, cell, k)
    if lemma == 1:
        while True:
            L = Poly((_rational(rng, bound), _rational(rng, bound)))
            M = Poly((_rational(rng, bound), _rational(rng, bound)))
            if not L.is_zero and not M.is_zero:
                return gelfond_report(L, M)
    xi = _dyadic(rng)
    if lemma == 2:
        m, n = int(cell[0]), int(cell[1])
        return resultant_bound(_int_poly(rng, m, bound), _int_poly(rng, n, bound), m, n, xi)
    if lemma == 3:
        # P = L*A, Q = L*B with A, B coprime of degree 1; factors kept small so
        # the products respect the coefficient bound
        f = max(1, int((bound / 2) ** 0.5))
        while True:
            L, A, B = (Poly((rng.randint(-f, f), rng.randint(1, f) * rng.choice((-1, 1)))) for _ in range(3))
            if resultant(A, B, 1, 1) != 0:
                rep = common_factor_bound(L * A, L * B, xi)
                if isinstance(rep, BoundReport):
                    return rep
    if lemma == 4:
        return det_bound(*(_int_poly(rng, 2, bound) for _ in range(3)), xi)
    raise ValueError(f"unknown lemma {lemma}")


def cells(lemma: int) -> list[str]:
    return ["11", "12", "21", "22"] if lemma == 2 else ["-"]


@dataclass
class SuiteSummary:
    lemma: int
    seed: int
    trials: int
    verified: int = 0
    violated: int = 0
    inconclusive: int = 0
    equalities: int = 0
    min_slack: Fraction | None = None

    def to_json(self) -> dict:
        return {
            "lemma": self.lemma,
            "seed": self.seed,
            "trials": self.trials,
            "verified": self.verified,
            "violated": self.violated,
            "inconclusive": self.inconclusive,
            "equalities": self.equalities,
            "min_slack_lo": None if self.min_slack is None else str(self.min_slack),
        }


def iter_suite(lemma: int, trials: int, seed: int = 0, coeff_bound: int = 100) -> Iterator[BoundReport]:
    """Seeded random instances; ``trials`` per (m, n) cell for the resultant suite (2)."""
    for cell in cells(lemma):
        for k in range(trials):
            yield _instance(lemma, cell, k, seed, coeff_bound)


def run_suite(lemma: int, trials: int, seed: int = 0, coeff_bound: int = 100, out=None) -> SuiteSummary:
    """Run a suite, optionally streaming JSONL rows to ``out``."""
    summary = SuiteSummary(lemma=lemma, seed=seed, trials=trials)
    for rep in iter_suite(lemma, trials, seed, coeff_bound):
        if rep.status == VERIFIED:
            summary.verified += 1
        elif rep.status == VIOLATED:
            summary.violated += 1
        else:
            summary.inconclusive += 1
        s = rep.slack
        if s.is_point and s.lo == 0:
            summary.equalities += 1
        if summary.min_slack is None or s.lo < summary.min_slack:
            summary.min_slack = s.lo
        if out is not None:
            out.write(json.dumps(rep.to_json(), separators=(",", ":")) + "\n")
    return summary


__all__ = [
    "BoundReport",
    "C_MN",
    "CmnTable",
    "INCONCLUSIVE",
    "NotApplicable",
    "SuiteSummary",
    "VERIFIED",
    "VIOLATED",
    "cells",
    "check_gelfond",
    "common_factor_bound",
    "det_bound",
    "gelfond_report",
    "iter_suite",
    "resultant_bound",
    "run_suite",
]
