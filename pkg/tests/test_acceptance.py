"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -v -s`` or
``python3 tests/test_acceptance.py``.
"""

import json
import math
import sys
import time

import numpy as np
import pytest

from diskops.cli import run as cli_run
from diskops.criteria import CANONICAL_SYMBOLS, LemmaSample, cross_validate, density_ratio, density_search, density_sweep, luecking_lemma_check
from diskops.geometry import EuclideanSubdisk, PseudoDisk, euclidean_subdisk_area, pseudo_distance
from diskops.nets import center_net
from diskops.norms import SpaceSpec, besov_norm, bmoa_norm, h2_littlewood_paley, hardy_classical
from diskops.operator import Lcg64, TestFamily, besov_test, lower_bound_estimate, moebius_test
from diskops.quadrature import default_grid, disk_template, integrate_subdisk
from diskops.symbols import BlaschkeProduct, Polynomial, Rational, identity, symbol_from_json

HALF_ONE_MINUS_Z = Rational([1, -1], [2])
THREE_PLUS_Z = Rational([3, 1], [4])


def _verdict(capsys, n, ok, detail, elapsed, budget):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    with capsys.disabled():
        print(f"\nCRITERION {n}: {status} ({detail}; {elapsed:.1f}s of {budget:.0f}s)", flush=True)
    assert ok, detail
    assert within, f"runtime {elapsed:.1f}s exceeds {budget}s"


@pytest.fixture(scope="module")
def grid():
    return default_grid()


def _membership_area(d: PseudoDisk):
    # indicator of rho(a, z) < eta on an off-centre polar window around the disk
    u, w = disk_template(64, 16)
    c, rad = d.euclidean()
    big = 1.5 * rad
    z = c + 0.2 * rad * np.exp(1j) + big * u
    return big * big * float(np.dot(w, pseudo_distance(d.center, z) < d.radius))


def test_criterion_1_geometry_closed_forms(capsys):
    t0 = time.perf_counter()
    worst_d = worst_e = 0.0
    for r in (0.0, 0.5, 0.9):
        for eta in (0.3, 0.5, 0.7):
            d = PseudoDisk(r, eta)
            exact = eta ** 2 * (1 - r ** 2) ** 2 / (1 - eta ** 2 * r ** 2) ** 2
            area = _membership_area(d)
            worst_d = max(worst_d, abs(area / exact - 1))
            e = EuclideanSubdisk(r, eta)
            quad = integrate_subdisk(lambda z: np.ones(z.shape), e)
            worst_e = max(worst_e, abs(quad / euclidean_subdisk_area(e) - 1))
    ok = worst_d <= 1e-2 and worst_e <= 1e-3
    _verdict(capsys, 1, ok, f"max rel error D {worst_d:.2e}, Delta {worst_e:.2e}", time.perf_counter() - t0, 10)


def test_criterion_2_inclusion(capsys):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    n = 10_000
    alpha = 0.999 * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    eta = rng.uniform(0.01, 0.99, n)
    # a quarter of the samples sit on the subdisk boundary
    s = np.sqrt(rng.uniform(size=n))
    s[: n // 4] = 1.0 - 1e-12
    z = alpha + eta * (1 - np.abs(alpha)) * s * np.exp(2j * np.pi * rng.uniform(size=n))
    bound = 2 * eta / (1 + eta ** 2)
    violations = int(np.sum(pseudo_distance(alpha, z) >= bound))
    _verdict(capsys, 2, violations == 0, f"{violations} violations in {n} samples", time.perf_counter() - t0, 5)


def test_criterion_3_h2_oracle_triangle(grid, capsys):
    t0 = time.perf_counter()
    rng = Lcg64(33)
    worst_poly = 0.0
    for deg in range(0, 9):
        for _ in range(3):
            f = Polynomial([rng.complex_square() for _ in range(deg + 1)])
            cl = hardy_classical(f).value ** 2
            lp = h2_littlewood_paley(f, grid)
            worst_poly = max(worst_poly, abs(cl / lp - 1))
    worst_moeb = 0.0
    for a in (0, 0.3, 0.6, 0.9, 0.95):
        f = moebius_test(a)
        target = 1 - a * a
        worst_moeb = max(worst_moeb, abs(hardy_classical(f).value ** 2 / target - 1), abs(h2_littlewood_paley(f, grid) / target - 1))
    ok = worst_poly <= 0.02 and worst_moeb <= 0.02
    _verdict(capsys, 3, ok, f"classical vs LP {worst_poly:.2e}, Moebius {worst_moeb:.2e}", time.perf_counter() - t0, 60)


def test_criterion_4_extremal_bands(grid, capsys):
    t0 = time.perf_counter()
    bands = {}
    alphas = (0.3, 0.6, 0.9, 0.99)
    for p in (1.5, 2.0, 3.0):
        vals = [hardy_classical(moebius_test(a), p).value ** p / (1 - a) for a in alphas]
        bands[f"H^{p:g}"] = max(vals) / min(vals)
    vals = [bmoa_norm(moebius_test(a), grid=grid).value for a in (0, 0.5, 0.9, 0.99)]
    bands["BMOA"] = max(vals) / min(vals)
    for p in (2.0, 3.0):
        vals = [besov_norm(besov_test(a, p), p, grid).value for a in alphas]
        bands[f"B^{p:g}"] = max(vals) / min(vals)
    bz = bmoa_norm(identity(), grid=grid).value ** 2
    ok = all(v <= 4 for v in bands.values()) and abs(bz / 0.5 - 1) <= 0.02
    detail = ", ".join(f"{k} {v:.2f}" for k, v in bands.items()) + f", ||z||_*^2 {bz:.4f}"
    _verdict(capsys, 4, ok, detail, time.perf_counter() - t0, 300)


def test_criterion_5_luecking_lemma(capsys):
    t0 = time.perf_counter()
    rng = Lcg64(55)
    checked = violations = degenerate = 0
    margin = math.inf
    while checked < 1000:
        deg = 1 + min(5, int(6 * rng.uniform()))
        f = Polynomial([0j] + [rng.complex_square() for _ in range(deg)])
        r = 0.9 * math.sqrt(rng.uniform())
        t = 2 * math.pi * rng.uniform()
        eta = 0.1 + 0.4 * rng.uniform()
        lam = 0.05 + 0.4 * rng.uniform()
        res = luecking_lemma_check(LemmaSample(f, r * complex(math.cos(t), math.sin(t)), eta, lam))
        if res.degenerate:
            degenerate += 1
            continue
        checked += 1
        violations += not res.holds
        margin = min(margin, res.lhs - res.rhs)
    detail = f"{violations} violations in {checked} samples, min margin {margin:.2e}, {degenerate} degenerate skipped"
    _verdict(capsys, 5, violations == 0, detail, time.perf_counter() - t0, 300)


def test_criterion_6_density_ground_truth(capsys):
    t0 = time.perf_counter()
    at_zero = density_ratio(identity(), 0.25, PseudoDisk(0, 0.5))
    sweep = density_sweep(identity(), 0.25, 0.5, center_net(0.3))
    edge = density_ratio(HALF_ONE_MINUS_Z, 0.25, PseudoDisk(1 - 2.0 ** -10, 0.5))
    verdicts = {}
    for name, g in (("z", identity()), ("(1-z)/2", HALF_ONE_MINUS_Z)):
        verdicts[name] = tuple(density_search(g, region=region).verdict for region in ("pseudo", "euclidean"))
    ok = (
        abs(at_zero / 0.75 - 1) <= 0.01
        and sweep.inf_ratio >= 0.5
        and edge < 0.05
        and verdicts["z"] == ("holds", "holds")
        and verdicts["(1-z)/2"] == ("fails", "fails")
    )
    detail = f"ratio at 0 {at_zero:.4f}, sweep inf {sweep.inf_ratio:.4f}, edge {edge:.4f}, verdicts {verdicts}"
    _verdict(capsys, 6, ok, detail, time.perf_counter() - t0, 300)


@pytest.mark.slow
def test_criterion_7_cross_validation(capsys):
    t0 = time.perf_counter()
    pairs = agree = 0
    lines = []
    for name, node in CANONICAL_SYMBOLS:
        rep = cross_validate(symbol_from_json(node))
        pairs += len(rep.spaces)
        agree += sum(s.agree for s in rep.spaces)
        lines.append(f"{name}:{rep.density.verdict}/" + "".join("+" if s.bounded_below else "-" for s in rep.spaces))
    ok = pairs >= 12 and agree == pairs
    _verdict(capsys, 7, ok, f"{agree}/{pairs} verdict pairs agree [{' '.join(lines)}]", time.perf_counter() - t0, 1800)


def test_criterion_8_lower_bound_witness(grid, capsys):
    t0 = time.perf_counter()
    alphas = (0.0,) + tuple((1 - 2.0 ** -k) * np.exp(1j * t) for k in range(1, 11) for t in (0.0, math.pi / 2, math.pi, 3 * math.pi / 2))
    families = [
        TestFamily("moebius", alphas),
        TestFamily("monomials", maxdeg=8),
        TestFamily("random", count=8, maxdeg=6, seed=8),
    ]
    spaces = [SpaceSpec("hardy-calderon", 2), SpaceSpec("hardy-calderon", 3), SpaceSpec("bmoa"), SpaceSpec("qp", 0.5),
              SpaceSpec("besov", 2), SpaceSpec("besov", 3)]
    worst, where = math.inf, ""
    for spec in spaces:
        fams = families + ([TestFamily("besov", alphas[1:], p=spec.p)] if spec.space == "besov" else [])
        for fam in fams:
            rep = lower_bound_estimate(THREE_PLUS_Z, spec, fam, grid, batch=8)
            if rep.inf_ratio < worst:
                worst, where = rep.inf_ratio, f"{spec.label()} {rep.witness}"
    _verdict(capsys, 8, worst >= 0.48, f"min ratio {worst:.4f} at {where}", time.perf_counter() - t0, 300)


def test_criterion_9_determinism(tmp_path, capsys):
    t0 = time.perf_counter()
    g = json.dumps(BlaschkeProduct([0.5, -0.5]).to_json())
    argv = [
        "report", "--g", g, "--seed", "9", "--levels", "7", "--angular-base", "16", "--separation", "0.5",
        "--r-limit", "0.999", "--beta-separation", "0.4", "--beta-r-limit", "0.999", "--n-boundary", "256",
        "--samples", "20", "--mass-count", "1", "--base-levels", "4", "--refine-levels", "7",
    ]
    texts = []
    for k, workers in enumerate((1, 1, 4)):
        out = tmp_path / f"r{k}.json"
        assert cli_run([*argv, "--workers", str(workers), "-o", str(out)]) == 0
        doc = json.loads(out.read_text())
        doc.pop("timings")
        texts.append(json.dumps(doc, indent=2, sort_keys=True))
    ok = texts[0] == texts[1] == texts[2]
    _verdict(capsys, 9, ok, "repeat and 4-worker runs byte-identical modulo timings" if ok else "documents differ",
             time.perf_counter() - t0, 600)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
