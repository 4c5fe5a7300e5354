"""Command-line interface: ``diskops <subcommand> [options]``.

Every subcommand writes one JSON document (schema 1) holding the effective
configuration, the results and wall-clock timings; ``check-density`` can
instead write its profile as CSV. Exit codes: 0 success, 2 invalid
configuration, 3 numerical failure or resource limit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from .criteria.crossval import CrossValParams, cross_validate
from .criteria.density import (
    DEFAULT_C_FACTORS,
    DEFAULT_ETA_GRID,
    DEFAULT_R_LIMIT,
    DEFAULT_SEPARATION,
    REGIONS,
    c_grid_from_factors,
    density_search,
)
from .criteria.lemmas import LemmaSample, exceptional_mass_ratio, luecking_lemma_check
from .errors import ConfigError, NumericalFailure, ResourceLimit
from .nets import center_net
from .norms import SPACES, SpaceSpec, space_norms
from .operator import FAMILY_KINDS, Lcg64, TestFamily, lower_bound_estimate, random_polynomials
from .quadrature import DEFAULT_CELL_CAP, DEFAULT_R_MAX, make_grid
from .symbols import Polynomial, derivative, symbol_from_json, sup_norm_estimate

SCHEMA = 1
EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


# ----------------------------------------------------------------- parsing


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _complexes(text: str) -> list:
    try:
        return [complex(x.replace(" ", "")) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated complex numbers, got {text!r}") from None


def _spaces(text: str) -> list:
    """``space[:p[:gamma]]`` items separated by commas, e.g. ``hardy-calderon:2,bmoa``."""
    out = []
    for item in text.split(","):
        parts = item.strip().split(":")
        if not parts[0]:
            continue
        try:
            nums = [float(x) for x in parts[1:]]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad space item {item!r}") from None
        out.append((parts[0], *nums))
    return out


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("grid")
    g.add_argument("--levels", type=int, default=12)
    g.add_argument("--angular-base", type=int, default=32)
    g.add_argument("--rmax", type=float, default=DEFAULT_R_MAX)
    g.add_argument("--cell-cap", type=int, default=DEFAULT_CELL_CAP)
    n = p.add_argument_group("nets")
    n.add_argument("--separation", type=float, default=DEFAULT_SEPARATION, help="density center net")
    n.add_argument("--r-limit", type=float, default=DEFAULT_R_LIMIT, help="density center net")
    n.add_argument("--beta-separation", type=float, default=0.2, help="BMOA/Q_p supremum net")
    n.add_argument("--beta-r-limit", type=float, default=1.0 - 2.0 ** -10, help="BMOA/Q_p supremum net")
    n.add_argument("--n-boundary", type=int, default=1024, help="boundary nodes for the Stolz-angle norm")
    o = p.add_argument_group("output")
    o.add_argument("--output", "-o", default="-")
    o.add_argument("--format", choices=("json", "csv"), default="json")
    o.add_argument("--workers", type=int, default=1)
    o.add_argument("--seed", type=int, default=None)


def _space_args(p: argparse.ArgumentParser, default="hardy-calderon"):
    p.add_argument("--space", choices=SPACES, default=default)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--aperture", type=float, default=0.5)


def _lattice_args(p: argparse.ArgumentParser):
    p.add_argument("--c-grid", type=_floats, default=list(DEFAULT_C_FACTORS), help="factors of the sup norm of g")
    p.add_argument("--eta-grid", type=_floats, default=list(DEFAULT_ETA_GRID))
    p.add_argument("--delta-min", type=float, default=0.01)


def _lemma_args(p: argparse.ArgumentParser):
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--eps", type=float, default=0.5)
    p.add_argument("--mass-count", type=int, default=3)
    p.add_argument("--mass-eta", type=float, default=0.5)
    p.add_argument("--mass-lambda", type=float, default=0.25)
    p.add_argument("--mass-beta", type=float, default=0.5)


def _crossval_args(p: argparse.ArgumentParser):
    p.add_argument("--spaces", type=_spaces, default=[("hardy-calderon", 2.0), ("hardy-calderon", 3.0), ("bmoa",), ("besov", 2.0)])
    p.add_argument("--bound-min", type=float, default=0.1)
    p.add_argument("--base-levels", type=int, default=6, help="alpha-net radii 1-2^-k, k=1..N")
    p.add_argument("--refine-levels", type=int, default=10, help="refined radii up to 1-2^-N")
    p.add_argument("--directions", type=int, default=4)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diskops", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("norm", help="norm of one function in one space")
    p.add_argument("--f", required=True, help="symbol JSON file or inline JSON")
    _space_args(p)
    _common(p)

    p = sub.add_parser("check-density", help="level-set density search for g")
    p.add_argument("--g", required=True)
    p.add_argument("--region", choices=REGIONS, default="pseudo")
    _lattice_args(p)
    _common(p)

    p = sub.add_parser("lower-bound", help="family infimum of ||S_g f|| / ||f||")
    p.add_argument("--g", required=True)
    _space_args(p)
    p.add_argument("--family", choices=FAMILY_KINDS, default="moebius")
    p.add_argument("--alpha-net", type=_complexes, default=[0.0, 0.5, 0.9, 0.99])
    p.add_argument("--maxdeg", type=int, default=4)
    p.add_argument("--count", type=int, default=8)
    _common(p)

    p = sub.add_parser("lemma-check", help="randomized local-lemma checks and exceptional mass ratios")
    p.add_argument("--f", default=None, help="fixed f; random polynomials otherwise")
    _lemma_args(p)
    _common(p)

    p = sub.add_parser("cross-validate", help="density verdict against bounded-below verdicts")
    p.add_argument("--g", required=True)
    _lattice_args(p)
    _crossval_args(p)
    _common(p)

    p = sub.add_parser("report", help="all of the above for one symbol")
    p.add_argument("--g", required=True)
    _lattice_args(p)
    _crossval_args(p)
    _lemma_args(p)
    _common(p)
    return parser


# ------------------------------------------------------------------ helpers


def load_symbol(spec: str, field: str):
    """Symbol from a JSON file path or an inline JSON object."""
    text = spec
    if not spec.lstrip().startswith("{"):
        try:
            text = Path(spec).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read symbol file: {exc.strerror}", field) from None
    try:
        node = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg} at line {exc.lineno}", field) from None
    return symbol_from_json(node)


def _check(cond, msg, field):
    if not cond:
        raise ConfigError(msg, field)


def _validate(args):
    _check(args.levels >= 1, "must be >= 1", "--levels")
    _check(args.angular_base >= 4, "must be >= 4", "--angular-base")
    _check(0.0 < args.rmax < 1.0, "must lie in (0, 1)", "--rmax")
    _check(args.cell_cap >= 1, "must be positive", "--cell-cap")
    _check(0.0 < args.separation < 1.0, "must lie in (0, 1)", "--separation")
    _check(0.0 < args.r_limit < 1.0, "must lie in (0, 1)", "--r-limit")
    _check(0.0 < args.beta_separation < 1.0, "must lie in (0, 1)", "--beta-separation")
    _check(0.0 < args.beta_r_limit < 1.0, "must lie in (0, 1)", "--beta-r-limit")
    _check(args.n_boundary >= 1, "must be positive", "--n-boundary")
    _check(args.workers >= 1, "must be >= 1", "--workers")
    if args.format == "csv":
        _check(args.command == "check-density", "csv output is only available for check-density", "--format")
    if hasattr(args, "c_grid"):
        _check(args.c_grid and all(c > 0 for c in args.c_grid), "needs positive factors", "--c-grid")
        _check(args.eta_grid and all(0 < e < 1 for e in args.eta_grid), "needs values in (0, 1)", "--eta-grid")
        _check(0.0 <= args.delta_min <= 1.0, "must lie in [0, 1]", "--delta-min")
    if hasattr(args, "samples"):
        _check(args.seed is not None, "a seed is required for randomized checks", "--seed")
        _check(args.samples >= 1, "must be positive", "--samples")
        _check(args.mass_count >= 0, "must be >= 0", "--mass-count")
        for name in ("eps", "mass_eta", "mass_lambda", "mass_beta"):
            _check(0.0 < getattr(args, name) < 1.0, "must lie in (0, 1)", "--" + name.replace("_", "-"))
    if getattr(args, "family", None) == "random":
        _check(args.seed is not None, "a seed is required for the random family", "--seed")
    if hasattr(args, "spaces"):
        _check(args.spaces, "needs at least one space", "--spaces")
        _check(1 <= args.base_levels < args.refine_levels, "need 1 <= base-levels < refine-levels", "--refine-levels")
        _check(args.directions >= 1, "must be >= 1", "--directions")
        _check(args.bound_min > 0, "must be positive", "--bound-min")


def _space_from(args) -> SpaceSpec:
    return SpaceSpec(args.space, args.p, args.gamma, args.aperture)


def _parse_spaces(items) -> list:
    out = []
    for k, item in enumerate(items):
        name, *nums = item
        try:
            out.append(SpaceSpec(name, *nums))
        except ConfigError as exc:
            raise ConfigError(str(exc), f"--spaces[{k}]") from None
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, np.generic):
        return _jsonable(x.item())
    if isinstance(x, float) and not math.isfinite(x):
        return None
    return x


class Context:
    """Grids and nets built from the validated arguments, shared by every section."""

    def __init__(self, args):
        self.args = args
        self.grid = make_grid(args.levels, args.angular_base, args.rmax, cell_cap=args.cell_cap)
        self.beta_net = center_net(args.beta_separation, args.beta_r_limit)
        self.timings = {}

    def net(self):
        return center_net(self.args.separation, self.args.r_limit)

    def timed(self, name, fn, *a, **kw):
        t0 = time.perf_counter()
        out = fn(*a, **kw)
        self.timings[name] = time.perf_counter() - t0
        return out


# ---------------------------------------------------------------- sections


def _density(ctx, g, region="pseudo"):
    a = ctx.args
    return density_search(g, c_grid_from_factors(g, a.c_grid), a.eta_grid, ctx.net(), a.delta_min, region)


def run_lemma_section(ctx, f):
    a = ctx.args
    rng = Lcg64(a.seed)
    checks = []
    for k in range(a.samples):
        if f is None:
            deg = 1 + min(5, int(6 * rng.uniform()))
            fk = Polynomial([0j] + [rng.complex_square() for _ in range(deg)])
        else:
            fk = f
        r = math.sqrt(0.81 * rng.uniform())
        t = 2.0 * math.pi * rng.uniform()
        eta = 0.1 + 0.4 * rng.uniform()
        lam = 0.05 + 0.4 * rng.uniform()
        alpha = r * complex(math.cos(t), math.sin(t))
        res = luecking_lemma_check(LemmaSample(fk, alpha, eta, lam, a.eps))
        checks.append({"index": k, "alpha": alpha, "eta": eta, "lambda": lam, "lhs": res.lhs, "rhs": res.rhs,
                       "holds": res.holds, "degenerate": res.degenerate})
    live = [c for c in checks if not c["degenerate"]]
    fs = [f] * a.mass_count if f is not None else random_polynomials(a.mass_count, 6, a.seed)
    mass = []
    for k, fk in enumerate(fs):
        for kind in ("A", "B"):
            for eps in (0.5, 0.25, 0.125):
                try:
                    val = exceptional_mass_ratio(kind, fk, 0.0, a.mass_beta, None, eps, a.mass_eta, a.mass_lambda)
                except ConfigError as exc:
                    val, note = None, str(exc)
                else:
                    note = None
                mass.append({"function": k, "kind": kind, "eps": eps, "implied_constant": val, "note": note})
    return {
        "samples": checks,
        "violations": sum(1 for c in live if not c["holds"]),
        "degenerate": len(checks) - len(live),
        "min_margin": min((c["lhs"] - c["rhs"] for c in live), default=None),
        "mass_ratios": mass,
    }


def run_crossval_section(ctx, g):
    a = ctx.args
    params = CrossValParams(
        c_factors=tuple(a.c_grid),
        eta_grid=tuple(a.eta_grid),
        delta_min=a.delta_min,
        separation=a.separation,
        r_limit=a.r_limit,
        bound_min=a.bound_min,
        base_levels=tuple(range(1, a.base_levels + 1)),
        refine_levels=tuple(range(a.base_levels + 1, a.refine_levels + 1)),
        directions=a.directions,
        n_boundary=a.n_boundary,
        workers=a.workers,
        grid=ctx.grid,
        beta_net=ctx.beta_net,
    )
    return cross_validate(g, _parse_spaces(a.spaces), params)


def cmd_norm(ctx):
    a = ctx.args
    f = load_symbol(a.f, "--f")
    res = ctx.timed("norm", space_norms, [f], _space_from(a), ctx.grid, ctx.beta_net, a.n_boundary)[0]
    return {"symbol": f.to_json()}, res.to_json()


def cmd_check_density(ctx):
    a = ctx.args
    g = load_symbol(a.g, "--g")
    v = ctx.timed("density", _density, ctx, g, a.region)
    return {"symbol": g.to_json()}, v


def cmd_lower_bound(ctx):
    a = ctx.args
    g = load_symbol(a.g, "--g")
    fam = TestFamily(a.family, tuple(a.alpha_net) if a.family in ("moebius", "besov", "peaked") else (),
                     a.p, a.maxdeg, a.count, a.seed)
    rep = ctx.timed("lower_bound", lower_bound_estimate, g, _space_from(a), fam, ctx.grid, ctx.beta_net,
                    a.n_boundary, workers=a.workers)
    return {"symbol": g.to_json(), "family": fam.to_json()}, rep.to_json()


def cmd_lemma_check(ctx):
    a = ctx.args
    f = load_symbol(a.f, "--f") if a.f else None
    res = ctx.timed("lemma", run_lemma_section, ctx, f)
    return {"symbol": None if f is None else f.to_json()}, res


def cmd_cross_validate(ctx):
    g = load_symbol(ctx.args.g, "--g")
    rep = ctx.timed("cross_validate", run_crossval_section, ctx, g)
    return {"symbol": g.to_json()}, rep.to_json()


REPORT_SPACES = (
    SpaceSpec("hardy", 2.0),
    SpaceSpec("hardy-calderon", 2.0),
    SpaceSpec("bmoa"),
    SpaceSpec("besov", 2.0),
    SpaceSpec("bergman", 2.0, 1.0),
)


def cmd_report(ctx):
    a = ctx.args
    g = load_symbol(a.g, "--g")
    sup, theta = sup_norm_estimate(g)
    norms = []
    t0 = time.perf_counter()
    for spec in REPORT_SPACES:
        norms.append(space_norms([g], spec, ctx.grid, ctx.beta_net, a.n_boundary)[0].to_json())
    ctx.timings["norms"] = time.perf_counter() - t0
    cv = ctx.timed("cross_validate", run_crossval_section, ctx, g)
    nonconstant = bool(np.any(np.abs(derivative(g, np.array([0.0, 0.3, -0.5j, 0.7 + 0.1j]))) > 0))
    lemma = ctx.timed("lemma", run_lemma_section, ctx, g if nonconstant else None)
    results = {
        "sup_norm": {"value": sup, "theta": theta},
        "norms": norms,
        "density": cv.density.to_json(),
        "cross_validate": cv.to_json(),
        "lemma": dict(lemma, f="g" if nonconstant else "random polynomials"),
    }
    return {"symbol": g.to_json()}, results


COMMANDS = {
    "norm": cmd_norm,
    "check-density": cmd_check_density,
    "lower-bound": cmd_lower_bound,
    "lemma-check": cmd_lemma_check,
    "cross-validate": cmd_cross_validate,
    "report": cmd_report,
}


def _config(args, ctx) -> dict:
    # workers only affect wall-clock time; they are recorded next to the timings
    cfg = {k: v for k, v in vars(args).items() if k not in ("output", "workers")}
    cfg["grid"] = ctx.grid.meta()
    cfg["beta_net"] = ctx.beta_net.meta()
    return cfg


def _write(text: str, path: str):
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _validate(args)
        ctx = Context(args)
        inputs, results = COMMANDS[args.command](ctx)
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["a_re", "a_im", "ratio"])
            for pt, ratio in results.profile:
                w.writerow([repr(pt.real), repr(pt.imag), repr(ratio)])
            _write(buf.getvalue(), args.output)
            return EXIT_OK
        if hasattr(results, "to_json"):
            results = results.to_json()
        doc = {
            "schema": SCHEMA,
            "command": args.command,
            "config": _config(args, ctx),
            "inputs": inputs,
            "results": results,
            "timings": {"sections": ctx.timings, "workers": args.workers},
        }
        _write(json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n", args.output)
        return EXIT_OK
    except ConfigError as exc:
        print(f"diskops: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"diskops: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ResourceLimit as exc:
        print(f"diskops: resource limit: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
