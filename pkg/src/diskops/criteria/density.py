"""Area density of the level sets G_c = {|g| > c} in pseudo-hyperbolic and Euclidean subdisks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..geometry import EuclideanSubdisk, PseudoDisk
from ..nets import CenterNet, center_net
from ..quadrature import disk_template, subdisk_nodes
from ..symbols import Symbol, evaluate, sup_norm_estimate

REGIONS = ("pseudo", "euclidean")
DEFAULT_ETA_GRID = (0.5, 0.7, 0.9)
DEFAULT_C_FACTORS = tuple(2.0 ** -k for k in range(1, 7))
DEFAULT_SEPARATION = 0.3
DEFAULT_R_LIMIT = 1.0 - 2.0 ** -10
SWEEP_RESOLUTION = (16, 6)


def _share(inside, outside):
    # inside / (inside + outside) is exactly 0 or 1 for empty or full masks
    total = inside + outside
    return np.clip(inside / np.where(total > 0, total, 1.0), 0.0, 1.0)


def _ratio_from_nodes(g: Symbol, c: float, z, w) -> float:
    mask = np.abs(evaluate(g, z)) > c
    return float(_share(np.dot(w, mask), np.dot(w, ~mask)))


def density_ratio(g: Symbol, c: float, d: PseudoDisk, resolution=(32, 6)) -> float:
    """A(G_c within D) / A(D) on a local polar grid over the pseudo-hyperbolic disk."""
    if not c > 0:
        raise ConfigError("c must be positive", "c")
    z, w = subdisk_nodes(d, *resolution)
    return _ratio_from_nodes(g, c, z, w)


def density_ratio_euclidean(g: Symbol, c: float, d: EuclideanSubdisk, resolution=(32, 6)) -> float:
    """A(G_c within Delta) / A(Delta) for the Euclidean subdisk."""
    if not c > 0:
        raise ConfigError("c must be positive", "c")
    z, w = subdisk_nodes(d, *resolution)
    return _ratio_from_nodes(g, c, z, w)


def _disk_geometry(centers, eta, region):
    """Euclidean centres and radii of the chosen subdisks around ``centers``."""
    a = np.asarray(centers, dtype=complex)
    if region == "pseudo":
        s = 1.0 - eta * eta * np.abs(a) ** 2
        return a * (1.0 - eta * eta) / s, eta * (1.0 - np.abs(a) ** 2) / s
    if region == "euclidean":
        return a, eta * (1.0 - np.abs(a))
    raise ConfigError(f"unknown region {region!r}; expected one of {REGIONS}", "region")


def density_table(g: Symbol, cs, eta: float, net, region="pseudo", resolution=SWEEP_RESOLUTION, chunk=2048):
    """Density ratios at every net centre for every threshold in ``cs``.

    |g| is evaluated once per subdisk node and thresholded for all ``cs``.
    Returns an array of shape (len(cs), len(net)).
    """
    pts = net.points if isinstance(net, CenterNet) else np.asarray(list(net), dtype=complex)
    cs = np.asarray(cs, dtype=float)
    if np.any(cs <= 0):
        raise ConfigError("thresholds must be positive", "c_grid")
    if not 0.0 < eta < 1.0:
        raise ConfigError("eta must lie in (0, 1)", "eta")
    u, w = disk_template(*resolution)
    centers, radii = _disk_geometry(pts, eta, region)
    out = np.empty((cs.size, pts.size))
    for s in range(0, pts.size, chunk):
        z = centers[s : s + chunk, None] + radii[s : s + chunk, None] * u[None, :]
        mod = np.abs(evaluate(g, z))
        for k, c in enumerate(cs):
            mask = mod > c
            out[k, s : s + chunk] = _share(mask @ w, ~mask @ w)
    return out


def _worst(pts, ratios) -> int:
    """Argmin of the ratios; ties go to the outermost centre, then the smallest angle."""
    ang = np.mod(np.angle(pts), 2.0 * np.pi)
    return int(np.lexsort((ang, -np.round(np.abs(pts), 12), ratios))[0])


@dataclass
class SweepResult:
    inf_ratio: float
    worst_center: complex
    profile: list = field(default_factory=list)


def density_sweep(g: Symbol, c: float, eta: float, net, region="pseudo", resolution=SWEEP_RESOLUTION) -> SweepResult:
    """Minimum density ratio over the net, its argmin and the full (a, ratio) profile."""
    pts = net.points if isinstance(net, CenterNet) else np.asarray(list(net), dtype=complex)
    ratios = density_table(g, [c], eta, pts, region, resolution)[0]
    k = _worst(pts, ratios)
    return SweepResult(float(ratios[k]), complex(pts[k]), list(zip(pts.tolist(), ratios.tolist())))


@dataclass
class DensityVerdict:
    verdict: str
    best_c: float
    best_eta: float
    achieved_delta: float
    worst_center: complex
    profile: list = field(default_factory=list)
    lattice: list = field(default_factory=list)
    refined: list | None = None
    region: str = "pseudo"
    net_meta: dict = field(default_factory=dict)

    def to_json(self, profile_limit: int | None = 16) -> dict:
        prof = sorted(self.profile, key=lambda t: (t[1], t[0].real, t[0].imag))
        if profile_limit is not None:
            prof = prof[:profile_limit]
        return {
            "verdict": self.verdict,
            "best_c": self.best_c,
            "best_eta": self.best_eta,
            "achieved_delta": self.achieved_delta,
            "worst_center": [self.worst_center.real, self.worst_center.imag],
            "region": self.region,
            "net": self.net_meta,
            "lattice": self.lattice,
            "refined_lattice": self.refined,
            "profile_size": len(self.profile),
            "profile_lowest": [[a.real, a.imag, r] for a, r in prof],
        }


def default_c_grid(g: Symbol):
    """Thresholds 2^-1 .. 2^-6 times the sup-norm estimate (unscaled if g vanishes)."""
    return c_grid_from_factors(g, DEFAULT_C_FACTORS)


def refine_net(net: CenterNet) -> CenterNet:
    """Half the separation, one dyadic step closer to the boundary."""
    return center_net(net.separation / 2.0, 1.0 - (1.0 - net.r_limit) / 2.0)


def _lattice(g, c_grid, eta_grid, net, region, resolution):
    pts = net.points
    rows = []
    for eta in eta_grid:
        table = density_table(g, c_grid, eta, net, region, resolution)
        for c, ratios in zip(c_grid, table):
            k = _worst(pts, ratios)
            rows.append({"c": float(c), "eta": float(eta), "inf_ratio": float(ratios[k]), "_ratios": ratios, "_k": k})
    return rows


def density_search(
    g: Symbol,
    c_grid=None,
    eta_grid=DEFAULT_ETA_GRID,
    net: CenterNet | None = None,
    delta_min: float = 0.01,
    region: str = "pseudo",
    resolution=SWEEP_RESOLUTION,
) -> DensityVerdict:
    """Existential search for (c, eta) with inf over the net of the density ratio >= delta_min.

    Lattice order is eta ascending, then c descending; the first pair that
    holds is reported. If none holds, the search is repeated on a refined net
    and the verdict is ``fails`` when it still holds nowhere, otherwise
    ``inconclusive``. The reported pair then maximizes the base inf ratio.
    """
    if region not in REGIONS:
        raise ConfigError(f"unknown region {region!r}; expected one of {REGIONS}", "region")
    c_grid = sorted(default_c_grid(g) if c_grid is None else [float(c) for c in c_grid], reverse=True)
    eta_grid = sorted(float(e) for e in eta_grid)
    if not c_grid or not eta_grid:
        raise ConfigError("c and eta grids must be nonempty", "c_grid" if not c_grid else "eta_grid")
    if not 0.0 <= delta_min <= 1.0:
        raise ConfigError("delta_min must lie in [0, 1]", "delta_min")
    net = net or center_net(DEFAULT_SEPARATION, DEFAULT_R_LIMIT)
    pts = net.points

    rows = _lattice(g, c_grid, eta_grid, net, region, resolution)
    holding = [r for r in rows if r["inf_ratio"] >= delta_min]
    refined_rows = None
    if holding:
        best, verdict = holding[0], "holds"
    else:
        best = max(rows, key=lambda r: r["inf_ratio"])
        fine = refine_net(net)
        refined_rows = _lattice(g, c_grid, eta_grid, fine, region, resolution)
        verdict = "fails" if all(r["inf_ratio"] < delta_min for r in refined_rows) else "inconclusive"

    def public(rs):
        return [{k: v for k, v in r.items() if not k.startswith("_")} for r in rs]

    ratios = best["_ratios"]
    return DensityVerdict(
        verdict=verdict,
        best_c=best["c"],
        best_eta=best["eta"],
        achieved_delta=best["inf_ratio"],
        worst_center=complex(pts[best["_k"]]),
        profile=list(zip(pts.tolist(), ratios.tolist())),
        lattice=public(rows),
        refined=None if refined_rows is None else public(refined_rows),
        region=region,
        net_meta=net.meta(),
    )


def c_grid_from_factors(g: Symbol, factors) -> list:
    """``factors`` times the sup-norm estimate of g (unscaled if g vanishes)."""
    sup, _ = sup_norm_estimate(g)
    scale = sup if sup > 0 else 1.0
    return [float(f) * scale for f in factors]


__all__ = [
    "DensityVerdict",
    "SweepResult",
    "c_grid_from_factors",
    "center_net",
    "density_ratio",
    "density_ratio_euclidean",
    "density_search",
    "density_sweep",
    "density_table",
    "default_c_grid",
    "refine_net",
]
