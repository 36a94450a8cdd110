"""Command-line interface.

Exit codes: 0 success, 1 verification or property failure, 2 usage or
configuration error, 3 precision cap exhausted.  Errors are also written to
stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import conjapprox, lemmas, minseq
from .certreal import ConfigError, PrecisionError, constants, dump_xi, enclosure_to_json, load_xi
from .certreal.enclosure import format_bound

CACHE_ENV = "GELFOND2_CACHE_DIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_PRECISION = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _positive(kind):
    def parse(s):
        try:
            v = kind(s)
        except (ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"invalid value {s!r}") from None
        if v <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {s!r}")
        return v

    return parse


# caching ------------------------------------------------------------------------


def cache_dir(explicit: str | None) -> Path | None:
    d = explicit or os.environ.get(CACHE_ENV)
    return Path(d) if d else None


def cache_key(xi, backend: str, x_max: int) -> str:
    h = hashlib.sha256()
    h.update(dump_xi(xi).encode())
    h.update(f"\0{backend}\0{x_max}".encode())
    return h.hexdigest()


# subcommands --------------------------------------------------------------------


def cmd_constants(args) -> int:
    c = constants(args.bits)
    exact = {
        "gamma": str(c.gamma),
        "gamma_sq": str(c.gamma_sq),
        "c0": "(6*2^(1/gamma))^(-1/gamma)",
        "root_exponent": str(c.root_exponent),
        "distance_exponent": str(c.distance_exponent),
    }
    rows = []
    for name, enc in c.as_enclosures().items():
        rows.append(
            {
                "name": name,
                "exact": exact[name],
                "enclosure": enclosure_to_json(enc),
                "width": format_bound(enc.width, 6, upward=True),
            }
        )
    check = c.gamma_sq - c.gamma - 1
    rows.append({"name": "gamma_sq - gamma - 1", "exact": str(check), "is_zero": not check})
    _emit("".join(_dumps(r) + "\n" for r in rows), args.out)
    return EXIT_OK


def _records_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["i", "X", "c0", "c1", "c2", "value_lo", "value_hi", "exact_zero", "certified"])
    for r in records:
        d = r.to_json()
        w.writerow([d["i"], d["X"], *d["coeffs"], d["value_lo"], d["value_hi"], d["exact_zero"], d["certified"]])
    return buf.getvalue()


def cmd_minseq(args) -> int:
    xi = load_xi(args.xi)
    cdir = None if args.no_cache else cache_dir(args.cache_dir)
    path = None
    text = None
    if cdir is not None:
        path = cdir / f"minseq-{cache_key(xi, args.backend, args.xmax)}.jsonl"
        if path.is_file():
            text = path.read_text(encoding="utf-8")
    if text is None:
        records = minseq.build(xi, args.xmax, backend=args.backend, workers=args.workers)
        text = minseq.dumps_records(records)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp = path.with_suffix(".tmp")
            tmp.write_text(text, encoding="utf-8")
            tmp.replace(path)
    else:
        records = minseq.read_records(io.StringIO(text))
    _emit(text, args.out)
    if args.csv:
        Path(args.csv).write_text(_records_csv(records), encoding="utf-8")
    return EXIT_OK


def _load_records(path: str):
    with open(path, encoding="utf-8") as fh:
        try:
            return minseq.read_records(fh)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"malformed records file: {exc}") from exc


def _sequence_problems(records) -> list[str]:
    bad = []
    for a, b in zip(records, records[1:]):
        if not b.X > a.X:
            bad.append(f"heights not increasing at i={b.i}")
        if not b.value.hi < a.value.lo:
            bad.append(f"values not decreasing at i={b.i}")
        if not minseq.audit.det3_rank2(a.P, b.P):
            bad.append(f"P_{a.i} and P_{b.i} dependent")
    return bad


def cmd_audit(args) -> int:
    records = _load_records(args.records)
    xi = load_xi(args.xi) if args.xi else None
    rep = minseq.audit_criterion(records, args.c, xi=xi, c1=args.c1)
    out = {"summary": rep.summary(), "entries": [e.to_json() for e in rep.entries]}
    problems = _sequence_problems(records)
    out["sequence_problems"] = problems
    _emit(_dumps(out) + "\n", args.out)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "X", "X_next", "hypothesis_holds", "margin_lo", "margin_hi", "growth_lo", "growth_hi", "gcd_degree", "triple_det"])
        for e in rep.entries:
            m, g = enclosure_to_json(e.margin), enclosure_to_json(e.growth_ratio)
            w.writerow([e.i, e.X, e.X_next, e.hypothesis_holds, *m, *g, e.gcd_degree, e.triple_det])
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    return EXIT_FAIL if problems else EXIT_OK


def cmd_exponent(args) -> int:
    records = _load_records(args.records)
    rows = []
    best = None
    for (i, tau), nxt in zip(minseq.exponent_estimates(records), records[1:]):
        row = {"i": i, "X_next": nxt.X, "tau": None if tau is None else enclosure_to_json(tau)}
        rows.append(row)
        if tau is not None and nxt.X >= args.min_next and (best is None or tau.lo > best[1].lo):
            best = (i, tau)
    summary = {
        "summary": True,
        "min_next_height": args.min_next,
        "max_tau_index": None if best is None else best[0],
        "max_tau": None if best is None else enclosure_to_json(best[1]),
    }
    _emit("".join(_dumps(r) + "\n" for r in rows + [summary]), args.out)
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "X_next", "tau_lo", "tau_hi"])
        for r in rows:
            w.writerow([r["i"], r["X_next"], *(r["tau"] or ["inf", "inf"])])
        Path(args.csv).write_text(buf.getvalue(), encoding="utf-8")
    return EXIT_OK


def cmd_lemmas(args) -> int:
    fh = None
    if args.out and args.out != "-":
        fh = open(args.out, "w", encoding="utf-8")
    try:
        s = lemmas.run_suite(args.lemma, args.trials, args.seed, args.coeff_bound, out=fh)
    finally:
        if fh is not None:
            fh.close()
    sys.stdout.write(_dumps(s.to_json()) + "\n")
    return EXIT_OK if s.violated == 0 and s.inconclusive == 0 else EXIT_FAIL


def cmd_conjugate(args) -> int:
    xi = load_xi(args.xi)
    if args.xmin > args.xmax:
        raise UsageError("--xmin exceeds --xmax")
    grid = []
    X = args.xmin
    while X <= args.xmax:
        grid.append(X)
        X *= 2
    try:
        outcome = conjapprox.pipeline(xi, grid, workers=args.workers)
    except conjapprox.PreconditionError as exc:
        cert = None if exc.certificate is None else exc.certificate.to_text()
        sys.stderr.write(_dumps({"error": "precondition", "message": str(exc), "certificate": cert}) + "\n")
        return EXIT_FAIL
    if args.diagnostics:
        Path(args.diagnostics).write_text("".join(_dumps(d) + "\n" for d in outcome.diagnostics), encoding="utf-8")
    if not outcome.ok:
        sys.stderr.write(_dumps({"error": "grid_exhausted", "diagnostics": outcome.diagnostics}) + "\n")
        return EXIT_FAIL
    doc = outcome.result.to_json()
    doc["verification"] = outcome.result.report.to_json()
    _emit(_dumps(doc) + "\n", args.out)
    return EXIT_OK


# parser ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gelfond2", description="Degree-two polynomial approximation toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", help="print the golden-ratio constants")
    c.add_argument("--bits", type=_positive(int), default=64)
    c.add_argument("--out")
    c.set_defaults(func=cmd_constants)

    m = sub.add_parser("minseq", help="build the minimal-polynomial sequence")
    m.add_argument("--xi", required=True)
    m.add_argument("--xmax", type=_positive(int), required=True)
    m.add_argument("--backend", choices=("exhaustive", "lattice"), default="exhaustive")
    m.add_argument("--workers", type=_positive(int), default=1)
    m.add_argument("--out")
    m.add_argument("--csv")
    m.add_argument("--cache-dir")
    m.add_argument("--no-cache", action="store_true")
    m.set_defaults(func=cmd_minseq)

    a = sub.add_parser("audit", help="audit the proof chain on computed records")
    a.add_argument("--records", required=True)
    a.add_argument("--c", type=_positive(Fraction), default=Fraction(1, 4))
    a.add_argument("--c1", type=_positive(Fraction))
    a.add_argument("--xi")
    a.add_argument("--out")
    a.add_argument("--csv")
    a.set_defaults(func=cmd_audit)

    e = sub.add_parser("exponent", help="approximation exponent estimates")
    e.add_argument("--records", required=True)
    e.add_argument("--min-next", type=_positive(int), default=50)
    e.add_argument("--out")
    e.add_argument("--csv")
    e.set_defaults(func=cmd_exponent)

    lm = sub.add_parser("lemmas", help="seeded random checks of the auxiliary inequalities")
    lm.add_argument(
        "--lemma", type=int, choices=(1, 2, 3, 4), required=True,
        help="1 height sandwich, 2 resultant bound, 3 common factor, 4 determinant bound",
    )
    lm.add_argument("--trials", type=_positive(int), default=10000)
    lm.add_argument("--seed", type=int, default=0)
    lm.add_argument("--coeff-bound", type=_positive(int), default=100)
    lm.add_argument("--out")
    lm.set_defaults(func=cmd_lemmas)

    cj = sub.add_parser("conjugate", help="construct approximations by conjugate algebraic numbers")
    cj.add_argument("--xi", required=True)
    cj.add_argument("--xmin", type=_positive(int), default=16)
    cj.add_argument("--xmax", type=_positive(int), default=1 << 20)
    cj.add_argument("--workers", type=_positive(int), default=1)
    cj.add_argument("--out")
    cj.add_argument("--diagnostics")
    cj.set_defaults(func=cmd_conjugate)
    return p


def _error(kind: str, exc: BaseException) -> None:
    sys.stderr.write(_dumps({"error": kind, "type": type(exc).__name__, "message": str(exc)}) + "\n")


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        _error("usage", exc)
        return EXIT_USAGE
    except (ConfigError, OSError) as exc:
        _error("config", exc)
        return EXIT_USAGE
    except PrecisionError as exc:
        _error("precision", exc)
        return EXIT_PRECISION


run = main

if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
