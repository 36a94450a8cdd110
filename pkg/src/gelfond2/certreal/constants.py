"""Golden-ratio constants of the degree-two criterion."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .enclosure import Enclosure
from .surd import GAMMA, GAMMA_SQ, QuadSurd


def gamma_enclosure(bits: int = 64) -> Enclosure:
    return GAMMA.enclosure(bits)


def c0_enclosure(bits: int = 64) -> Enclosure:
    """``(6 * 2**(1/gamma)) ** (-1/gamma)`` to width ``2**-bits``."""
    prec = bits + 32
    while True:
        g = GAMMA.enclosure(prec)
        inv_g = g.reciprocal()
        base = Enclosure.point(6) * Enclosure.point(2).rpow(inv_g, prec)
        val = base.rpow(-inv_g, prec)
        if val.width <= Fraction(1, 1 << bits):
            return val.outward(bits + 2)
        prec *= 2


@dataclass(frozen=True)
class Constants:
    gamma: QuadSurd
    gamma_sq: QuadSurd
    c0: Enclosure
    root_exponent: QuadSurd  # (1 + gamma^2) / 2, exponent of r in the construction
    distance_exponent: QuadSurd  # (3 - gamma) / 2, exponent of Y in the distance bound
    bits: int

    def as_enclosures(self) -> dict[str, Enclosure]:
        b = self.bits
        return {
            "gamma": self.gamma.enclosure(b),
            "gamma_sq": self.gamma_sq.enclosure(b),
            "c0": self.c0,
            "root_exponent": self.root_exponent.enclosure(b),
            "distance_exponent": self.distance_exponent.enclosure(b),
        }


def constants(bits: int = 64) -> Constants:
    return Constants(
        gamma=GAMMA,
        gamma_sq=GAMMA_SQ,
        c0=c0_enclosure(bits),
        root_exponent=(1 + GAMMA_SQ) / 2,
        distance_exponent=(3 - GAMMA) / 2,
        bits=bits,
    )
