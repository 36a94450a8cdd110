"""Exact rationals, certified enclosures and target numbers."""

from .config import ConfigError, dump_xi, load_xi, parse_xi
from .constants import Constants, c0_enclosure, constants, gamma_enclosure
from .enclosure import (
    DEFAULT_CAP,
    ComplexEnclosure,
    Enclosure,
    Ordering,
    PrecisionError,
    compare,
    enclosure_from_json,
    enclosure_to_json,
    format_bound,
    resolve,
)
from .evaluator import Target, target_of
from .surd import GAMMA, GAMMA_SQ, QuadSurd
from .targets import (
    AlgebraicReal,
    ComplexRect,
    ContinuedFraction,
    FibonacciWord,
    FiniteQuotients,
    PeriodicQuotients,
    Rational,
    XiSpec,
    certificate,
    fibonacci_quotients,
    never_low_degree,
    refine,
)

__all__ = [
    "DEFAULT_CAP", "GAMMA", "GAMMA_SQ", "AlgebraicReal", "ComplexEnclosure", "ComplexRect",
    "ConfigError", "Constants", "ContinuedFraction", "Enclosure", "FibonacciWord",
    "FiniteQuotients", "Ordering", "PeriodicQuotients", "PrecisionError", "QuadSurd",
    "Rational", "Target", "XiSpec", "c0_enclosure", "certificate", "compare", "constants",
    "dump_xi", "enclosure_from_json", "enclosure_to_json", "fibonacci_quotients",
    "format_bound", "gamma_enclosure", "load_xi", "never_low_degree", "parse_xi", "refine",
    "resolve", "target_of",
]
