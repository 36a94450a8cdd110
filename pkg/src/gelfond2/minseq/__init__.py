"""Minimal-polynomial sequences, exponent estimates and the criterion audit."""

from .audit import AuditReport, IndexAudit, audit_criterion, exponent_estimates, independent_triples
from .build import (
    EXHAUSTIVE_DEFAULT_CAP,
    best_at_height,
    build,
    build_exhaustive,
    build_lattice,
    records_from_pool,
    running_minimum,
)
from .records import MinimalRecord, dumps_records, read_records, write_records

__all__ = [
    "EXHAUSTIVE_DEFAULT_CAP", "AuditReport", "IndexAudit", "MinimalRecord", "audit_criterion",
    "best_at_height", "build", "build_exhaustive", "build_lattice", "dumps_records",
    "exponent_estimates", "independent_triples", "read_records", "records_from_pool",
    "running_minimum", "write_records",
]
