"""Explicit approximation of a real number by conjugate algebraic numbers.

Pipeline for a real target xi and a height parameter X:

1. ``body_empty``: the body C(X) given by ``|P(xi)| <= X^-gamma^2 / 4`` and
   ``|P'(xi)|, |P''(xi)| <= c1 X`` (with ``c1 = (1+|xi|)^-2``) holds no
   nonzero integer polynomial of degree <= 2.
2. ``dual_basis``: a unimodular basis P_1, P_2, P_3 reduced for the norm
   ``max(X|P(xi)|, X|P'(xi)|, X^-gamma^2 |P''(xi)|)``; its largest norm is
   the achieved constant c2.
3. ``construct``: with ``B = T^2 - 1``, ``r = X^-(1+gamma^2)/2`` and
   ``s = 20 c2 / X``, expand ``(T-xi)^3 + s B((T-xi)/r) - T^3`` and
   ``s B((T-xi)/r)`` in the basis and round the coordinates (within 2) to
   integers in the residue classes that make ``P = T^3 + sum a_i P_i`` and
   ``Q = sum b_i P_i`` congruent to ``T^3 + 2`` and ``T^2 + 2`` mod 4.
4. ``verify``: every claimed property is re-checked with exact or certified
   arithmetic.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence


from . import kernels
from .certreal.enclosure import (
    DEFAULT_CAP,
    Enclosure,
    PrecisionError,
    enclosure_to_json,
)
from .certreal.evaluator import Target, target_of
from .certreal.surd import GAMMA, GAMMA_SQ
from .lattice import inverse_unimodular, lll
from .polyring import (
    Poly,
    RootEnclosure,
    content_primitive,
    derivative,
    det3,
    height,
    is_eisenstein_2,
    mod4_residue,
    real_roots,
)

B_POLY = Poly((-1, 0, 1))
DEFAULT_GRID = tuple(2**k for k in range(4, 21))
MAX_BOX_POINTS = 2_000_000
ONE_THIRD = Fraction(1, 3)


class BoxTooLarge(ValueError):
    pass


class PreconditionError(ValueError):
    """The target is complex, or algebraic of degree <= 2."""

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


def _real_target(xi) -> Target:
    t = target_of(xi)
    if t.is_complex:
        raise PreconditionError("the construction applies to real targets only")
    return t


def _pow_X(X, exponent: Enclosure, prec: int) -> Enclosure:
    return Enclosure.point(X).rpow(exponent, prec)


def _derivs(p: Poly) -> tuple[Poly, Poly, Poly]:
    d1 = derivative(p)
    return p, d1, derivative(d1)


# bodies ---------------------------------------------------------------------


@dataclass(frozen=True)
class BodySpec:
    """The body C(X); bounds are enclosures of (X^-gamma^2/4, c1 X, c1 X)."""

    X: int
    c1: Enclosure
    bounds: tuple[Enclosure, Enclosure, Enclosure]

    @classmethod
    def of(cls, xi, X, bits: int = 128) -> "BodySpec":
        t = _real_target(xi)
        x = t.enclosure(bits)
        c1 = ((1 + abs(x)) ** 2).reciprocal()
        b0 = _pow_X(X, -GAMMA_SQ.enclosure(bits), bits) * Fraction(1, 4)
        return cls(X=X, c1=c1, bounds=(b0, c1 * X, c1 * X))


@dataclass(frozen=True)
class BodyResult:
    empty: bool
    witness: Poly | None
    points_scanned: int
    method: str

    def __bool__(self) -> bool:
        return self.empty


def _phi_inv(x: Enclosure) -> list[list[Enclosure]]:
    # coefficients from (P(x), P'(x), P''(x))
    one, zero = Enclosure.point(1), Enclosure.point(0)
    return [[one, -x, x * x * Fraction(1, 2)], [zero, one, -x], [zero, zero, Enclosure.point(Fraction(1, 2))]]


def _in_body(t: Target, p: Poly, body: BodySpec, scale: Fraction, cap: int) -> bool:
    """Certified membership of ``p`` in C(X) with the first bound scaled by ``scale``."""
    polys = _derivs(p)
    bits = 64
    while True:
        decided = True
        for k, q in enumerate(polys):
            v = t.abs_value(q, bits)
            bound = body.bounds[k] if k else body.bounds[0] * scale
            if v.lo > bound.hi:
                return False
            if v.hi > bound.lo:
                decided = False
        if decided:
            return True
        if bits >= cap:
            raise PrecisionError("body membership unresolved at the cap")
        bits = min(2 * bits, cap)
        body = BodySpec.of(t.xi, body.X, bits)


def _lattice_box(t: Target, body: BodySpec, scale: Fraction) -> tuple[list[list[int]], list[int]]:
    """Reduced coordinates: returns ``(U, K)`` with every body point equal to U k, |k_j| <= K_j."""
    x = t.enclosure(128)
    xm = x.mid
    b = [body.bounds[0].hi * scale, body.bounds[1].hi, body.bounds[2].hi]
    # scaled body-coordinates of the coefficient basis vectors e_0, e_1, e_2
    cols = [(Fraction(1), Fraction(0), Fraction(0)), (xm, Fraction(1), Fraction(0)), (xm * xm, 2 * xm, Fraction(2))]
    S = Fraction(1 << 40) / min(b)
    rows = [[round(S * c[k] / b[k]) for k in range(3)] for c in cols]
    _, transform = lll(rows)
    U = [list(col) for col in zip(*transform)]  # body point a = U k
    Uinv = inverse_unimodular(U)
    phi = _phi_inv(x)
    K = []
    for j in range(3):
        tot = Fraction(0)
        for l in range(3):
            e = sum((phi[m][l] * Uinv[j][m] for m in range(3)), Enclosure.point(0))
            tot += max(abs(e.lo), abs(e.hi)) * b[l]
        K.append(math.floor(tot))
    return U, K


def body_empty(
    xi,
    X: int,
    method: str = "lattice",
    relax: Fraction = Fraction(1),
    cap: int = DEFAULT_CAP,
    max_points: int = MAX_BOX_POINTS,
) -> BodyResult:
    """Decide whether C(X) holds no nonzero integer polynomial of degree <= 2.

    ``relax`` multiplies the first bound (1/4 X^-gamma^2).  ``method`` is
    ``"lattice"`` (enumeration in LLL-reduced coordinates, any X) or ``"box"``
    (the coefficient box scanned by the float kernel; small X only).
    """
    t = _real_target(xi)
    if X < 1:
        raise ValueError("X must be >= 1")
    relax = Fraction(relax)
    body = BodySpec.of(t.xi, X)
    cands: list[tuple[int, int, int]]
    if method == "lattice":
        U, K = _lattice_box(t, body, relax)
        npts = math.prod(2 * k + 1 for k in K)
        if npts > max_points:
            raise BoxTooLarge(f"{npts} reduced-coordinate points exceed the limit {max_points}")
        ks = itertools.product(*(range(-k, k + 1) for k in K))
        A = [tuple(sum(U[i][j] * k[j] for j in range(3)) for i in range(3)) for k in ks]
        cands = sorted({a for a in A if any(a)}, key=lambda a: (a[2], a[1], a[0]))
    elif method == "box":
        x0 = float(t.enclosure(80).mid)
        b0, b1, b2 = (float(e.hi) for e in body.bounds)
        b0 *= float(relax)
        npts = (int(b2) + 1) * (2 * int(b1) + 3)
        if npts > max_points:
            raise BoxTooLarge(f"coefficient box of ~{npts} (a2, a1) pairs exceeds the limit {max_points}")
        slack = kernels.float_error_bound(max(b1, b2) * (1 + abs(x0)) + 1, abs(x0)) * 16 + 1e-9
        arr = kernels.box_scan(x0, x0 * x0, b0, b1, b2, slack)
        cands = sorted({tuple(int(v) for v in r) for r in arr.tolist() if any(r)}, key=lambda a: (a[2], a[1], a[0]))
    else:
        raise ValueError(f"unknown method {method!r}")
    for a in cands:
        p = Poly(a)
        if _in_body(t, p, body, relax, cap):
            return BodyResult(False, p, int(npts), method)
    return BodyResult(True, None, int(npts), method)


# dual basis -------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeBasis:
    X: int
    polys: tuple[Poly, Poly, Poly]
    norms: tuple[Enclosure, Enclosure, Enclosure]  # weighted norm of each P_i
    values: tuple[tuple[Enclosure, Enclosure, Enclosure], ...]  # |P_i|, |P_i'|, |P_i''| at xi
    c2: Fraction  # rational upper bound on max(norms)

    @property
    def matrix(self) -> list[list[int]]:
        """Columns are the coefficient vectors (constant first) of P_1, P_2, P_3."""
        return [[p.coeff(k) for p in self.polys] for k in range(3)]

    @property
    def det(self) -> int:
        return det3(*self.polys)


def _weighted_norm(t: Target, p: Poly, X: int, bits: int) -> tuple[Enclosure, tuple]:
    vals = tuple(t.abs_value(q, bits) for q in _derivs(p))
    w2 = _pow_X(X, -GAMMA_SQ.enclosure(bits), bits)
    parts = (vals[0] * X, vals[1] * X, vals[2] * w2)
    return Enclosure(max(e.lo for e in parts), max(e.hi for e in parts)), vals


def _round_up(q: Fraction, bits: int = 24) -> Fraction:
    d = 1 << bits
    return Fraction(math.ceil(q * d), d)


def dual_basis(xi, X: int, bits: int = 128) -> LatticeBasis:
    t = _real_target(xi)
    if X < 1:
        raise ValueError("X must be >= 1")
    x = t.enclosure(bits).mid
    w = (Fraction(X), Fraction(X), _pow_X(X, -GAMMA_SQ.enclosure(64), 64).mid)
    cols = [(Fraction(1), Fraction(0), Fraction(0)), (x, Fraction(1), Fraction(0)), (x * x, 2 * x, Fraction(2))]
    S = Fraction(1 << 40) / min(w)
    rows = [[round(S * w[k] * c[k]) for k in range(3)] for c in cols]
    _, transform = lll(rows)
    polys = []
    for row in transform:
        p = Poly(row)
        if p.lead < 0:
            p = -p
        polys.append(p)
    # order by weighted norm, then coefficients, for a canonical basis
    scored = []
    for p in polys:
        n, vals = _weighted_norm(t, p, X, bits)
        scored.append((n.hi, p.padded(3)[::-1], p, n, vals))
    scored.sort(key=lambda s: (s[0], s[1]))
    ps = tuple(s[2] for s in scored)
    if abs(det3(*ps)) != 1:
        raise AssertionError("reduced basis is not unimodular")
    norms = tuple(s[3] for s in scored)
    return LatticeBasis(
        X=X,
        polys=ps,
        norms=norms,
        values=tuple(s[4] for s in scored),
        c2=_round_up(max(n.hi for n in norms)),
    )


# construction -------------------------------------------------------------------


@dataclass
class ConjugateResult:
    X: int
    basis: LatticeBasis
    P: Poly
    Q: Poly
    a: tuple[int, int, int]
    b: tuple[int, int, int]
    theta: tuple[Enclosure, ...]
    eta: tuple[Enclosure, ...]
    r: Enclosure
    s: Fraction
    Y: int = 0
    roots_P: list[RootEnclosure] = field(default_factory=list)
    roots_Q: list[RootEnclosure] = field(default_factory=list)
    distances: list[Enclosure] = field(default_factory=list)
    c3: Enclosure | None = None
    c: Enclosure | None = None
    report: "VerificationReport | None" = None

    @property
    def c2(self) -> Fraction:
        return self.basis.c2

    def to_json(self) -> dict:
        ej = enclosure_to_json
        return {
            "X": self.X,
            "Y": self.Y,
            "P": self.P.to_text(4),
            "Q": self.Q.to_text(3),
            "basis": [p.to_text(3) for p in self.basis.polys],
            "a": list(self.a),
            "b": list(self.b),
            "r": ej(self.r),
            "s": str(self.s),
            "roots_P": [[str(z.lo), str(z.hi)] for z in self.roots_P],
            "roots_Q": [[str(z.lo), str(z.hi)] for z in self.roots_Q],
            "distances": [ej(d) for d in self.distances],
            "achieved": {
                "c2": str(self.c2),
                "c3": None if self.c3 is None else ej(self.c3),
                "c": None if self.c is None else ej(self.c),
            },
            "verified": None if self.report is None else self.report.ok,
        }


def _r_enc(X: int, prec: int) -> Enclosure:
    return _pow_X(X, -(1 + GAMMA_SQ.enclosure(prec)) * Fraction(1, 2), prec)


def _targets_cubic(x: Enclosure, s: Fraction, s_r2: Enclosure):
    """Coefficient vectors (constant first) of the theta and eta right-hand sides."""
    x2 = x * x
    eta = (s_r2 * x2 - s, -2 * x * s_r2, s_r2)
    theta = (eta[0] - x2 * x, eta[1] + 3 * x2, eta[2] - 3 * x)
    return theta, eta


def _matvec(Minv, v):
    return tuple(sum((v[j] * Minv[i][j] for j in range(3)), Enclosure.point(0)) for i in range(3))


def _pick(enc: Enclosure, residue: int) -> int | None:
    """Least integer ``= residue (mod 4)`` with ``|n - value| <= 2`` certified."""
    lo, hi = enc.hi - 2, enc.lo + 2
    n = math.ceil(lo)
    n += (residue - n) % 4
    return n if n <= hi else None


def construct(xi, X: int, basis: LatticeBasis, cap: int = DEFAULT_CAP) -> ConjugateResult:
    t = _real_target(xi)
    M = basis.matrix
    Minv = inverse_unimodular(M)
    res_a = tuple(sum(Minv[i][j] * v for j, v in enumerate((2, 0, 0))) % 4 for i in range(3))
    res_b = tuple(sum(Minv[i][j] * v for j, v in enumerate((2, 0, 1))) % 4 for i in range(3))
    s = 20 * basis.c2 / X
    mag = max(1, max(abs(v) for row in Minv for v in row)).bit_length()
    bits = 64 + mag + 3 * max(1, X).bit_length()
    while True:
        x = t.enclosure(bits)
        s_r2 = s * _pow_X(X, 2 + GAMMA.enclosure(bits), bits)  # s / r^2 = s X^(1+gamma^2)
        th_rhs, et_rhs = _targets_cubic(x, s, s_r2)
        theta, eta = _matvec(Minv, th_rhs), _matvec(Minv, et_rhs)
        a = tuple(_pick(e, k) for e, k in zip(theta, res_a))
        b = tuple(_pick(e, k) for e, k in zip(eta, res_b))
        if None not in a and None not in b:
            break
        if bits >= cap:
            raise PrecisionError("no admissible rounding found at the precision cap")
        bits = min(2 * bits, cap)
    P = Poly((0, 0, 0, 1)) + sum((ai * p for ai, p in zip(a, basis.polys)), Poly(()))
    Q = sum((bi * p for bi, p in zip(b, basis.polys)), Poly(()))
    return ConjugateResult(
        X=X, basis=basis, P=P, Q=Q, a=a, b=b, theta=theta, eta=eta, r=_r_enc(X, 128), s=s
    )


# verification ----------------------------------------------------------------------


@dataclass
class VerificationReport:
    checks: dict[str, bool]
    transformed_height_P: Enclosure | None = None
    transformed_height_Q: Enclosure | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_json(self) -> dict:
        ej = enclosure_to_json
        return {
            "ok": self.ok,
            "checks": self.checks,
            "transformed_height_P": None if self.transformed_height_P is None else ej(self.transformed_height_P),
            "transformed_height_Q": None if self.transformed_height_Q is None else ej(self.transformed_height_Q),
            "notes": self.notes,
        }


def _transformed_height(t: Target, p: Poly, r_fn, s: Fraction, cap: int) -> Enclosure:
    """Enclosure of H(s^-1 p(rT + xi) - B) refined until compared with 1/3."""
    bits = 64 + 2 * height(p).bit_length()
    while True:
        r = r_fn(bits)
        coeffs = []
        fact = 1
        rk = Enclosure.point(1)
        d = p
        for k in range(p.degree + 1):
            v = t.value_to_width(d, bits) if k < 3 else Enclosure.point(d.coeff(0))
            coeffs.append(v * rk * Fraction(1, fact) / s - B_POLY.coeff(k))
            d = derivative(d)
            fact *= k + 1
            rk = rk * r
        for k in range(p.degree + 1, 3):
            coeffs.append(Enclosure.point(-B_POLY.coeff(k)))
        mags = [abs(c) for c in coeffs]
        h = Enclosure(max(m.lo for m in mags), max(m.hi for m in mags))
        if h.hi < ONE_THIRD or h.lo >= ONE_THIRD or bits >= cap:
            return h
        bits = min(2 * bits, cap)


def _no_integer_root(p: Poly, roots: Sequence[RootEnclosure]) -> bool:
    """True iff no integer is a root of ``p`` (every real root lies in one of ``roots``)."""
    for z in roots:
        for n in range(math.ceil(z.lo), math.floor(z.hi) + 1):
            if p(n) == 0:
                return False
    return True


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def verify(result: ConjugateResult, xi, cap: int = DEFAULT_CAP) -> VerificationReport:
    """Re-check every property of ``result``; fills roots, heights and constants in place."""
    t = _real_target(xi)
    X, P, Q = result.X, result.P, result.Q
    checks: dict[str, bool] = {}
    notes: list[str] = []
    checks["unimodular"] = abs(result.basis.det) == 1
    checks["P_monic_cubic"] = P.degree == 3 and P.lead == 1
    checks["Q_quadratic"] = Q.degree == 2
    checks["P_congruence"] = mod4_residue(P, 4) == (2, 0, 0, 1)
    checks["Q_congruence"] = mod4_residue(Q, 3) == (2, 0, 1)
    # Eisenstein on the primitive part: an odd content keeps the shape mod 4
    for name, poly in (("P", P), ("Q", Q)):
        content, prim = content_primitive(poly)
        checks[f"{name}_eisenstein"] = is_eisenstein_2(prim)
        if content != 1:
            notes.append(f"{name} has content {content}; irreducible over Q, not primitive")
    c0, c1, c2 = Q.padded(3)
    checks["Q_discriminant_not_square"] = not _is_square(c1 * c1 - 4 * c0 * c2)
    window = all(
        (n - e.hi) >= -2 and (n - e.lo) <= 2
        for n, e in itertools.chain(zip(result.a, result.theta), zip(result.b, result.eta))
    )
    checks["rounding_window"] = window

    def r_fn(bits):
        return _r_enc(X, bits)

    hP = _transformed_height(t, P, r_fn, result.s, cap)
    hQ = _transformed_height(t, Q, r_fn, result.s, cap)
    checks["P_transformed_height"] = hP.hi < ONE_THIRD
    checks["Q_transformed_height"] = hQ.hi < ONE_THIRD

    r = _r_enc(X, 128)
    root_bits = 48 + math.ceil(-math.log2(float(r.lo)))
    x = t.enclosure(root_bits + 8)
    lo_w, hi_w = (x - 2 * r).hi, (x + 2 * r).lo
    rootsP = real_roots(P, root_bits, cap)
    rootsQ = real_roots(Q, root_bits, cap)
    checks["P_no_integer_root"] = _no_integer_root(P, rootsP)
    nearP = [z for z in rootsP if z.lo >= lo_w and z.hi <= hi_w]
    nearQ = [z for z in rootsQ if z.lo >= lo_w and z.hi <= hi_w]
    checks["P_two_roots_near"] = len(nearP) >= 2
    checks["Q_two_roots_near"] = len(nearQ) >= 2
    result.roots_P, result.roots_Q = nearP, nearQ
    dists = [abs(z.enclosure - x) for z in nearP + nearQ]
    result.distances = dists
    Y = max(height(P), height(Q))
    result.Y = Y
    g2 = GAMMA_SQ.enclosure(128)
    result.c3 = Enclosure.point(Y) / _pow_X(X, g2, 128)
    if dists:
        dmax = Enclosure(max(d.lo for d in dists), max(d.hi for d in dists))
        dist_exp = (3 - GAMMA.enclosure(128)) * Fraction(1, 2)
        result.c = dmax * _pow_X(Y, dist_exp, 128)
        checks["distances_within_2r"] = dmax.hi <= (2 * r).lo
    else:
        checks["distances_within_2r"] = False
        notes.append("no root enclosure inside the window")
    rep = VerificationReport(checks=checks, transformed_height_P=hP, transformed_height_Q=hQ, notes=notes)
    result.report = rep
    return rep


# pipeline ---------------------------------------------------------------------------


@dataclass
class PipelineOutcome:
    result: ConjugateResult | None
    diagnostics: list[dict]

    @property
    def ok(self) -> bool:
        return self.result is not None


def check_precondition(xi, prefix: int = 8) -> None:
    """Reject complex targets and targets algebraic of degree <= 2."""
    from .minseq import build_exhaustive

    t = _real_target(xi)
    if t.certificate is not None:
        raise PreconditionError("target is algebraic of degree <= 2", certificate=Poly(t.certificate))
    recs = build_exhaustive(t, prefix)
    if recs and recs[-1].exact_zero:
        raise PreconditionError("target is algebraic of degree <= 2", certificate=recs[-1].P)


def attempt(xi, X: int, cap: int = DEFAULT_CAP) -> tuple[ConjugateResult | None, dict]:
    """Run the four stages at one X; returns the result (if verified) and a diagnostic row."""
    diag: dict = {"X": X}
    try:
        body = body_empty(xi, X, cap=cap)
        diag["body_points"] = body.points_scanned
        if not body.empty:
            diag.update(stage="body_empty", witness=body.witness.to_text(3))
            return None, diag
        basis = dual_basis(xi, X)
        diag["c2"] = str(basis.c2)
        res = construct(xi, X, basis, cap)
        rep = verify(res, xi, cap)
        if not rep.ok:
            diag.update(stage="verify", failures=rep.failures)
            return None, diag
        diag["stage"] = "verified"
        return res, diag
    except (PrecisionError, BoxTooLarge) as exc:
        diag.update(stage="error", error=type(exc).__name__, message=str(exc))
        return None, diag


def pipeline(
    xi, grid: Sequence[int] = DEFAULT_GRID, workers: int = 1, cap: int = DEFAULT_CAP
) -> PipelineOutcome:
    """First grid point (in grid order) whose result verifies.

    Grid points are tried in batches of ``workers``; the outcome does not
    depend on the worker count.
    """
    check_precondition(xi)
    grid = sorted(set(int(X) for X in grid))
    diags: list[dict] = []
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        for start in range(0, len(grid), max(1, workers)):
            batch = grid[start : start + max(1, workers)]
            outs = list(pool.map(lambda X: attempt(xi, X, cap), batch)) if pool else [attempt(xi, X, cap) for X in batch]
            for res, diag in outs:  # rows after the first success are never emitted
                diags.append(diag)
                if res is not None:
                    return PipelineOutcome(res, diags)
    finally:
        if pool is not None:
            pool.shutdown()
    return PipelineOutcome(None, diags)


__all__ = [
    "BodyResult",
    "BodySpec",
    "BoxTooLarge",
    "ConjugateResult",
    "DEFAULT_GRID",
    "LatticeBasis",
    "PipelineOutcome",
    "PreconditionError",
    "VerificationReport",
    "attempt",
    "body_empty",
    "check_precondition",
    "construct",
    "dual_basis",
    "pipeline",
    "verify",
]
