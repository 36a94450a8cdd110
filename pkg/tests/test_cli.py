import csv
import json
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from gelfond2.cli import cache_key, main
from gelfond2.certreal import load_xi

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
CBRT2 = str(CONFIGS / "cbrt2.cfg")
SQRT2 = str(CONFIGS / "sqrt2.cfg")
FIB = str(CONFIGS / "fibonacci12.cfg")
UNITY = str(CONFIGS / "cube_root_unity.cfg")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def test_constants(capsys):
    code, out, _ = run(capsys, "constants", "--bits", "64")
    assert code == 0
    rows = {r["name"]: r for r in jsonl(out)}
    assert {"gamma", "gamma_sq", "c0", "root_exponent", "distance_exponent"} <= set(rows)
    lo, hi = (F(v) for v in rows["c0"]["enclosure"])
    assert F(2530, 10**4) <= lo <= hi <= F(2540, 10**4)
    assert rows["gamma_sq - gamma - 1"]["is_zero"] is True
    assert all(len(r["enclosure"]) == 2 for r in rows.values() if "enclosure" in r)


def test_minseq_sqrt2_certificate(capsys, tmp_path):
    code, out, _ = run(capsys, "minseq", "--xi", SQRT2, "--xmax", "10")
    assert code == 0
    last = jsonl(out)[-1]
    assert last["X"] == 2 and last["exact_zero"] is True and last["coeffs"] == [-2, 0, 1]
    assert last["value_lo"] == last["value_hi"] == "0"


def test_minseq_csv_and_out(capsys, tmp_path):
    out_path, csv_path = tmp_path / "r.jsonl", tmp_path / "r.csv"
    code, out, _ = run(capsys, "minseq", "--xi", CBRT2, "--xmax", "30", "--out", str(out_path), "--csv", str(csv_path))
    assert code == 0 and out == ""
    recs = jsonl(out_path.read_text())
    rows = list(csv.DictReader(csv_path.open()))
    assert len(rows) == len(recs) and rows[0]["X"] == "1"
    assert [int(r["X"]) for r in rows] == [r["X"] for r in recs]


def test_minseq_cache(capsys, tmp_path, monkeypatch):
    cdir = tmp_path / "c"
    code, a, _ = run(capsys, "minseq", "--xi", CBRT2, "--xmax", "40", "--cache-dir", str(cdir))
    key = cache_key(load_xi(CBRT2), "exhaustive", 40)
    path = cdir / f"minseq-{key}.jsonl"
    assert code == 0 and path.read_text() == a
    # a tampered cache entry is served as-is: proof that it was read
    path.write_text(a.splitlines()[0] + "\n")
    _, b, _ = run(capsys, "minseq", "--xi", CBRT2, "--xmax", "40", "--cache-dir", str(cdir))
    assert b == a.splitlines()[0] + "\n"
    _, c, _ = run(capsys, "minseq", "--xi", CBRT2, "--xmax", "40", "--cache-dir", str(cdir), "--no-cache")
    assert c == a
    # the env variable is used when no flag is given (set to a temp dir by conftest)
    monkeypatch.setenv("GELFOND2_CACHE_DIR", str(tmp_path / "env"))
    run(capsys, "minseq", "--xi", CBRT2, "--xmax", "40")
    assert (tmp_path / "env" / f"minseq-{key}.jsonl").is_file()


def test_cache_key_distinguishes_inputs():
    xi = load_xi(CBRT2)
    keys = {cache_key(xi, "exhaustive", 40), cache_key(xi, "lattice", 40), cache_key(xi, "exhaustive", 41),
            cache_key(load_xi(FIB), "exhaustive", 40)}
    assert len(keys) == 4


def test_minseq_workers_byte_identical(capsys):
    _, a, _ = run(capsys, "minseq", "--xi", CBRT2, "--xmax", "60", "--workers", "1", "--no-cache")
    _, b, _ = run(capsys, "minseq", "--xi", CBRT2, "--xmax", "60", "--workers", "3", "--no-cache")
    assert a == b


def test_minseq_complex_target(capsys):
    code, out, _ = run(capsys, "minseq", "--xi", UNITY, "--xmax", "5")
    assert code == 0
    last = jsonl(out)[-1]
    assert last["exact_zero"] and last["coeffs"] == [1, -1, 1]


@pytest.fixture
def records_file(capsys, tmp_path):
    path = tmp_path / "cbrt2.jsonl"
    main(["minseq", "--xi", CBRT2, "--xmax", "120", "--out", str(path)])
    capsys.readouterr()
    return path


def test_audit(capsys, records_file, tmp_path):
    csv_path = tmp_path / "a.csv"
    code, out, _ = run(capsys, "audit", "--records", str(records_file), "--c", "1/4", "--xi", CBRT2, "--csv", str(csv_path))
    assert code == 0
    doc = json.loads(out)
    s = doc["summary"]
    assert s["hypothesis_failures"] >= 1 and s["independent_triples"] and s["consecutive_independent"]
    assert s["c1"] == "101/400"
    assert doc["sequence_problems"] == []
    assert len(list(csv.DictReader(csv_path.open()))) == len(doc["entries"])


def test_audit_flags_broken_sequence(capsys, records_file, tmp_path):
    lines = records_file.read_text().splitlines()
    bad = tmp_path / "bad.jsonl"
    bad.write_text("\n".join([lines[0], lines[2], lines[1]] + lines[3:]) + "\n")
    code, out, _ = run(capsys, "audit", "--records", str(bad))
    assert code == 1 and json.loads(out)["sequence_problems"]


def test_exponent(capsys, records_file):
    code, out, _ = run(capsys, "exponent", "--records", str(records_file), "--min-next", "20")
    assert code == 0
    rows = jsonl(out)
    summary = rows[-1]
    assert summary["summary"] is True and summary["max_tau"] is not None
    lo, hi = (float(v) for v in summary["max_tau"])
    assert 1.5 < lo <= hi < 3


def test_lemmas(capsys, tmp_path):
    out_path = tmp_path / "l.jsonl"
    code, out, _ = run(capsys, "lemmas", "--lemma", "2", "--trials", "50", "--seed", "7", "--out", str(out_path))
    assert code == 0
    s = json.loads(out)
    assert s["violated"] == 0 and s["inconclusive"] == 0 and s["seed"] == 7
    rows = jsonl(out_path.read_text())
    assert len(rows) == 200 and {"lemma", "inputs", "lhs", "rhs", "slack", "status"} <= set(rows[0])


def test_conjugate(capsys, tmp_path):
    diag = tmp_path / "d.jsonl"
    code, out, _ = run(capsys, "conjugate", "--xi", CBRT2, "--xmin", "16", "--xmax", "64", "--diagnostics", str(diag))
    assert code == 0
    doc = json.loads(out)
    assert doc["verified"] is True and doc["verification"]["ok"] is True
    assert doc["X"] == 16 and len(doc["roots_P"]) >= 2
    assert jsonl(diag.read_text())[-1]["stage"] == "verified"


def test_conjugate_precondition(capsys):
    code, _, err = run(capsys, "conjugate", "--xi", SQRT2)
    assert code == 1
    e = json.loads(err)
    assert e["error"] == "precondition" and e["certificate"] == "-2 0 1"


def test_conjugate_complex_rejected(capsys):
    code, _, err = run(capsys, "conjugate", "--xi", UNITY)
    assert code == 1 and json.loads(err)["error"] == "precondition"


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["minseq", "--xmax", "5"],
        ["minseq", "--xi", CBRT2, "--xmax", "0"],
        ["minseq", "--xi", CBRT2, "--xmax", "5", "--backend", "magic"],
        ["lemmas", "--lemma", "9"],
        ["conjugate", "--xi", CBRT2, "--xmin", "64", "--xmax", "16"],
        ["frobnicate"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert json.loads(err)["error"] == "usage"


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("kind = algebraic\ncoefficients = -1 0 1\ninterval = -2 2\n")
    code, _, err = run(capsys, "minseq", "--xi", str(bad), "--xmax", "5")
    assert code == 2 and json.loads(err)["error"] == "config"
    code, _, err = run(capsys, "minseq", "--xi", str(tmp_path / "missing.cfg"), "--xmax", "5")
    assert code == 2
    junk = tmp_path / "junk.jsonl"
    junk.write_text('{"i": 1}\n')
    code, _, _ = run(capsys, "audit", "--records", str(junk))
    assert code == 2


def test_entry_point_module():
    out = subprocess.run(
        [sys.executable, "-m", "gelfond2.cli", "constants", "--bits", "32"], capture_output=True, text=True
    )
    assert out.returncode == 0 and len(out.stdout.splitlines()) == 6
