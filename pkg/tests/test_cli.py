"""CLI behaviour and golden JSON documents.

Regenerate the golden files with ``python3 tests/test_cli.py --regen``.
"""

import csv
import io
import json
import math
import sys
from pathlib import Path

import pytest

from diskops.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, run

GOLDEN = Path(__file__).resolve().parent.parent / "docs" / "golden"

Z = '{"kind": "polynomial", "coeffs": [[0, 0], [1, 0]]}'
HALF_ONE_MINUS_Z = '{"kind": "rational", "num": [[1, 0], [-1, 0]], "den": [[2, 0]]}'
COARSE = [
    "--levels", "6", "--angular-base", "16", "--separation", "0.6", "--r-limit", "0.99",
    "--beta-separation", "0.5", "--beta-r-limit", "0.99", "--n-boundary", "128",
]
CASES = {
    "norm": ["norm", "--f", Z, "--space", "besov", "--p", "3", *COARSE],
    "check-density": ["check-density", "--g", HALF_ONE_MINUS_Z, *COARSE],
    "lower-bound": ["lower-bound", "--g", HALF_ONE_MINUS_Z, "--space", "bmoa", *COARSE],
    "lemma-check": ["lemma-check", "--samples", "8", "--mass-count", "1", "--seed", "3", *COARSE],
    "cross-validate": ["cross-validate", "--g", Z, "--base-levels", "3", "--refine-levels", "5",
                       "--directions", "2", *COARSE],
    "report": ["report", "--g", Z, "--samples", "6", "--mass-count", "1", "--base-levels", "3",
               "--refine-levels", "5", "--directions", "2", "--seed", "1", *COARSE],
}


def _run(argv, tmp_path, name="out.json"):
    out = tmp_path / name
    code = run([*argv, "-o", str(out)])
    return code, (out.read_text() if out.exists() else None)


def _strip(doc):
    doc = dict(doc)
    doc.pop("timings", None)
    return doc


def _close(a, b, path="$"):
    if isinstance(a, dict):
        assert isinstance(b, dict) and a.keys() == b.keys(), path
        for k in a:
            _close(a[k], b[k], f"{path}.{k}")
    elif isinstance(a, list):
        assert isinstance(b, list) and len(a) == len(b), path
        for i, (x, y) in enumerate(zip(a, b)):
            _close(x, y, f"{path}[{i}]")
    elif isinstance(a, float) or isinstance(b, float):
        assert math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12), f"{path}: {a} != {b}"
    else:
        assert a == b, path


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden_documents(name, tmp_path):
    code, text = _run(CASES[name], tmp_path)
    assert code == EXIT_OK
    doc = json.loads(text)
    assert doc["schema"] == 1 and doc["command"] == name
    assert set(doc) == {"schema", "command", "config", "inputs", "results", "timings"}
    golden = json.loads((GOLDEN / f"{name}.json").read_text())
    _close(_strip(golden), _strip(doc))


def test_norm_value(tmp_path):
    _, text = _run(["norm", "--f", Z, "--space", "besov", "--p", "3"], tmp_path)
    assert json.loads(text)["results"]["value"] == pytest.approx(0.5 ** (1 / 3), rel=1e-2)


def test_symbol_file_input(tmp_path):
    path = tmp_path / "z.json"
    path.write_text(Z)
    code, text = _run(["norm", "--f", str(path), "--space", "bergman", "--p", "2", *COARSE], tmp_path)
    assert code == EXIT_OK
    assert json.loads(text)["results"]["value"] == pytest.approx(math.sqrt(0.5), rel=1e-2)


def test_report_is_deterministic_across_runs_and_workers(tmp_path):
    _, a = _run(CASES["report"], tmp_path, "a.json")
    _, b = _run(CASES["report"], tmp_path, "b.json")
    _, c = _run([*CASES["report"], "--workers", "4"], tmp_path, "c.json")
    texts = [json.dumps(_strip(json.loads(t)), sort_keys=True) for t in (a, b, c)]
    assert texts[0] == texts[1] == texts[2]


def test_csv_profile(tmp_path):
    code, text = _run([*CASES["check-density"], "--format", "csv"], tmp_path, "p.csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["a_re", "a_im", "ratio"]
    ratios = [float(r[2]) for r in rows[1:]]
    doc = json.loads(_run(CASES["check-density"], tmp_path)[1])["results"]
    assert len(ratios) == doc["profile_size"]
    assert min(ratios) == doc["achieved_delta"] == doc["profile_lowest"][0][2]
    assert all(0 <= r <= 1 for r in ratios)


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["norm", "--f", '{"kind": "blaschke", "zeros": [[0.1, 0], [1.5, 0]]}'], "$.zeros[1]"),
        (["norm", "--f", "/nonexistent/f.json"], "--f"),
        (["norm", "--f", Z, "--space", "besov", "--p", "1"], "p"),
        (["lemma-check"], "--seed"),
        (["report", "--g", Z], "--seed"),
        (["lower-bound", "--g", Z, "--family", "random"], "--seed"),
        (["norm", "--f", Z, "--format", "csv"], "--format"),
        (["check-density", "--g", Z, "--separation", "1.5"], "separation"),
    ],
)
def test_config_errors(argv, needle, tmp_path, capsys):
    code, _ = _run(argv, tmp_path)
    assert code == EXIT_CONFIG
    err = capsys.readouterr().err
    assert "invalid configuration" in err and needle in err


def test_resource_limit_exit_code(tmp_path, capsys):
    code, _ = _run(["norm", "--f", Z, "--cell-cap", "1000"], tmp_path)
    assert code == EXIT_NUMERIC
    assert "resource limit" in capsys.readouterr().err


def test_numerical_failure_exit_code(tmp_path):
    huge = '{"kind": "polynomial", "coeffs": [[0, 0], [1e300, 0], [1e300, 0]]}'
    code, _ = _run(["norm", "--f", huge, "--space", "bergman", "--p", "4", *COARSE], tmp_path)
    assert code == EXIT_NUMERIC


def regenerate():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, argv in CASES.items():
        assert run([*argv, "-o", str(GOLDEN / f"{name}.json")]) == EXIT_OK


if __name__ == "__main__" and "--regen" in sys.argv:
    regenerate()
