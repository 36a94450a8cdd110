"""Exponent estimates and the step-by-step audit of the criterion's proof chain."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..certreal.constants import c0_enclosure
from ..certreal.enclosure import Enclosure, Ordering, PrecisionError, compare
from ..certreal.evaluator import target_of
from ..certreal.surd import GAMMA, GAMMA_SQ
from ..polyring import det3, gcd_z
from .records import MinimalRecord

PREC = 96


def _pow(X: int, exponent: Enclosure) -> Enclosure:
    return Enclosure.point(X).rpow(exponent, PREC)


def independent_triples(records: Sequence[MinimalRecord]) -> list[int]:
    """Indices ``i`` (1-based, as in the records) with det(P_{i-1}, P_i, P_{i+1}) != 0."""
    out = []
    for k in range(1, len(records) - 1):
        if det3(records[k - 1].P, records[k].P, records[k + 1].P) != 0:
            out.append(records[k].i)
    return out


def exponent_estimates(records: Sequence[MinimalRecord]) -> list[tuple[int, Enclosure | None]]:
    """``tau_i = -log|P_i(xi)| / log X_{i+1}`` for every record with a successor.

    ``None`` stands for an infinite exponent (exact zero value).
    """
    out: list[tuple[int, Enclosure | None]] = []
    for r, nxt in zip(records, records[1:]):
        if r.exact_zero or r.value.hi == 0:
            out.append((r.i, None))
            continue
        if r.value.lo <= 0:
            raise PrecisionError(f"value enclosure of record {r.i} touches zero")
        tau = -r.value.log(PREC) / Enclosure.point(nxt.X).log(PREC)
        out.append((r.i, tau))
    return out


@dataclass(frozen=True)
class IndexAudit:
    i: int
    X: int
    X_next: int
    hypothesis_holds: bool | None  # |P_i(xi)| <= c X_{i+1}^{-gamma^2}
    fails_below_next: bool | None  # no P with H(P) <= X_{i+1}-1 meets c X^{-gamma^2}
    margin: Enclosure  # |P_i(xi)| X_{i+1}^{gamma^2}
    growth_ratio: Enclosure  # X_i^gamma / (2 c1 X_{i+1})
    gcd_degree: int
    triple_det: int | None  # det(P_{i-1}, P_i, P_{i+1})
    tail_product: Enclosure  # X_{i+1} |P_i(xi)|
    dirichlet_product: Enclosure  # X_{i+1}^2 |P_i(xi)|
    tau: Enclosure | None

    def to_json(self) -> dict:
        from ..certreal.enclosure import enclosure_to_json as ej

        return {
            "i": self.i,
            "X": self.X,
            "X_next": self.X_next,
            "hypothesis_holds": self.hypothesis_holds,
            "fails_below_next": self.fails_below_next,
            "margin": ej(self.margin),
            "growth_ratio": ej(self.growth_ratio),
            "gcd_degree": self.gcd_degree,
            "triple_det": self.triple_det,
            "tail_product": ej(self.tail_product),
            "dirichlet_product": ej(self.dirichlet_product),
            "tau": None if self.tau is None else ej(self.tau),
        }


@dataclass
class AuditReport:
    c: Fraction
    c1: Fraction
    c0: Enclosure
    entries: list[IndexAudit] = field(default_factory=list)
    independent_triples: list[int] = field(default_factory=list)
    consecutive_independent: bool = True
    final_bound_holds: bool = False  # 1 <= 6 c1 (2 c1)^{1/gamma}, i.e. c1 >= c0
    tail_decreasing: bool | None = None
    c1_sensitivity: dict[str, float] = field(default_factory=dict)
    inconclusive: int = 0

    @property
    def hypothesis_failures(self) -> list[int]:
        return [e.i for e in self.entries if e.hypothesis_holds is False]

    @property
    def no_polynomial_indices(self) -> list[int]:
        return [e.i for e in self.entries if e.fails_below_next]

    def summary(self) -> dict:
        from ..certreal.enclosure import enclosure_to_json as ej

        return {
            "c": str(self.c),
            "c1": str(self.c1),
            "c0": ej(self.c0),
            "indices": len(self.entries),
            "hypothesis_failures": len(self.hypothesis_failures),
            "no_polynomial_indices": len(self.no_polynomial_indices),
            "independent_triples": self.independent_triples,
            "consecutive_independent": self.consecutive_independent,
            "coprime_consecutive": sum(1 for e in self.entries if e.gcd_degree == 0),
            "final_bound_holds": self.final_bound_holds,
            "tail_decreasing": self.tail_decreasing,
            "c1_sensitivity": self.c1_sensitivity,
            "inconclusive": self.inconclusive,
        }


def _holds_le(value_fn, rhs: Enclosure) -> bool | None:
    """Decide ``value <= rhs`` refining ``value`` when possible; None if unresolved."""
    for bits in (64, 128, 256, 512, 1024):
        v = value_fn(bits)
        order = compare(v, rhs)
        if order is Ordering.LESS:
            return True
        if order is Ordering.GREATER:
            return False
        if value_fn.__name__ == "stored":
            return None
    return None


def audit_criterion(records: Sequence[MinimalRecord], c, xi=None, c1=None) -> AuditReport:
    """Evaluate every step of the proof chain on computed records.

    When ``xi`` is given, values are recomputed at higher precision whenever
    a decision is not resolved by the stored enclosures.
    """
    if len(records) < 3:
        raise ValueError("audit needs at least three records")
    c = Fraction(c)
    c1 = Fraction(c1) if c1 is not None else c * Fraction(101, 100)
    target = target_of(xi) if xi is not None else None
    g = GAMMA.enclosure(PREC)
    g2 = GAMMA_SQ.enclosure(PREC)
    report = AuditReport(c=c, c1=c1, c0=c0_enclosure(64))
    report.final_bound_holds = compare(Enclosure.point(c1), report.c0) is Ordering.GREATER
    taus = dict(exponent_estimates(records))
    tails = []
    for k in range(len(records) - 1):
        r, nxt = records[k], records[k + 1]

        def stored(bits, r=r):
            return r.value

        def fresh(bits, r=r):
            return target.abs_value(r.P, bits)

        value_fn = fresh if target is not None else stored
        bound = c * _pow(nxt.X, -g2)
        holds = _holds_le(value_fn, bound)
        below = None
        if r.certified or target is None:
            # p_X = |P_i(xi)| on [X_i, X_{i+1}); test the last integer height
            h = _holds_le(value_fn, c * _pow(nxt.X - 1, -g2))
            below = None if h is None else (not h)
            if not r.certified:
                below = None
        if holds is None:
            report.inconclusive += 1
        gd = gcd_z(r.P, nxt.P).degree
        tdet = det3(records[k - 1].P, r.P, nxt.P) if k >= 1 else None
        v = r.value
        entry = IndexAudit(
            i=r.i,
            X=r.X,
            X_next=nxt.X,
            hypothesis_holds=holds,
            fails_below_next=below,
            margin=v * _pow(nxt.X, g2),
            growth_ratio=_pow(r.X, g) / (2 * c1 * nxt.X),
            gcd_degree=gd,
            triple_det=tdet,
            tail_product=v * nxt.X,
            dirichlet_product=v * (nxt.X ** 2),
            tau=taus.get(r.i),
        )
        report.entries.append(entry)
        tails.append(entry.tail_product)
        if det3_rank2(r.P, nxt.P) is False:
            report.consecutive_independent = False
    report.independent_triples = independent_triples(records)
    if len(tails) >= 4:
        half = len(tails) // 2
        first = max(e.hi for e in tails[:half])
        second = max(e.hi for e in tails[half:])
        report.tail_decreasing = second < first
    for mult in ("1.01", "1.1", "2"):
        cc = c * Fraction(mult)
        ok = sum(
            1 for e in report.entries if (e.growth_ratio * (c1 / cc)).hi <= 1
        )
        report.c1_sensitivity[mult] = ok / len(report.entries)
    return report


def det3_rank2(p, q) -> bool:
    """True iff the coefficient vectors of P and Q are linearly independent."""
    a, b = p.padded(3), q.padded(3)
    return any(a[s] * b[t] - a[t] * b[s] != 0 for s, t in ((0, 1), (0, 2), (1, 2)))
