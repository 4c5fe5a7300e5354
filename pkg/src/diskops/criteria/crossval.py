"""Compare the level-set density verdict with bounded-below estimates for S_g."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..nets import center_net
from ..norms import SpaceSpec
from ..operator import TestFamily, lower_bound_estimate
from ..quadrature import PolarGrid
from ..symbols import Symbol, evaluate
from .density import (
    DEFAULT_C_FACTORS,
    DEFAULT_ETA_GRID,
    DEFAULT_R_LIMIT,
    DEFAULT_SEPARATION,
    c_grid_from_factors,
    density_search,
)

DEFAULT_SPACES = (
    SpaceSpec("hardy-calderon", 2.0),
    SpaceSpec("hardy-calderon", 3.0),
    SpaceSpec("bmoa"),
    SpaceSpec("besov", 2.0),
)


@dataclass
class CrossValParams:
    c_factors: tuple = DEFAULT_C_FACTORS
    eta_grid: tuple = DEFAULT_ETA_GRID
    delta_min: float = 0.01
    separation: float = DEFAULT_SEPARATION
    r_limit: float = DEFAULT_R_LIMIT
    bound_min: float = 0.1
    max_drop: float = 0.5
    base_levels: tuple = tuple(range(1, 7))
    refine_levels: tuple = tuple(range(7, 11))
    directions: int = 4
    n_boundary: int = 1024
    workers: int = 1
    grid: PolarGrid | None = None
    beta_net: object = None

    def __post_init__(self):
        if not self.bound_min > 0:
            raise ConfigError("bound_min must be positive", "bound_min")
        if not 0.0 < self.max_drop < 1.0:
            raise ConfigError("max_drop must lie in (0, 1)", "max_drop")
        if self.directions < 1:
            raise ConfigError("directions must be >= 1", "directions")
        if not self.base_levels or not self.refine_levels:
            raise ConfigError("alpha-net levels must be nonempty", "base_levels")

    def to_json(self) -> dict:
        return {
            "c_factors": list(self.c_factors),
            "eta_grid": list(self.eta_grid),
            "delta_min": self.delta_min,
            "separation": self.separation,
            "r_limit": self.r_limit,
            "bound_min": self.bound_min,
            "max_drop": self.max_drop,
            "base_levels": list(self.base_levels),
            "refine_levels": list(self.refine_levels),
            "directions": self.directions,
            "n_boundary": self.n_boundary,
        }


def probe_directions(g: Symbol, count: int = 4, samples: int = 4096) -> list:
    """``count`` equispaced angles plus the boundary angle where |g| is smallest."""
    theta = 2.0 * math.pi * np.arange(samples) / samples
    mod = np.abs(evaluate(g, (1.0 - 2.0 ** -14) * np.exp(1j * theta)))
    angles = [2.0 * math.pi * k / count for k in range(count)]
    low = float(theta[int(np.argmin(mod))])
    if all(abs(math.remainder(low - a, 2.0 * math.pi)) > 1e-9 for a in angles):
        angles.append(low)
    return angles


def alpha_net(directions, levels, include_origin: bool) -> list:
    """Points (1 - 2^-k) e^{i theta}; level-major, then direction order."""
    pts = [0j] if include_origin else []
    for k in levels:
        r = 1.0 - 2.0 ** -k
        pts.extend(r * complex(math.cos(t), math.sin(t)) for t in directions)
    return pts


def family_for(space: SpaceSpec, net) -> TestFamily:
    if space.space == "besov":
        return TestFamily("besov", tuple(a for a in net if a != 0), p=space.p)
    return TestFamily("moebius", tuple(net))


@dataclass
class SpaceVerdict:
    space: SpaceSpec
    inf_base: float
    inf_refined: float
    witness: str
    bounded_below: bool
    agree: bool | None
    ratios: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "label": self.space.label(),
            "inf_base": self.inf_base,
            "inf_refined": self.inf_refined,
            "witness": self.witness,
            "bounded_below": self.bounded_below,
            "agree": self.agree,
            "ratios": [{"member": k, "ratio": r} for k, r in self.ratios],
        }


@dataclass
class CrossValReport:
    density: object
    spaces: list
    params: CrossValParams

    @property
    def agreement(self) -> float:
        votes = [s.agree for s in self.spaces]
        return sum(1 for v in votes if v) / len(votes) if votes else 1.0

    def to_json(self) -> dict:
        return {
            "density": self.density.to_json(),
            "spaces": [s.to_json() for s in self.spaces],
            "agreement": self.agreement,
            "params": self.params.to_json(),
        }


def cross_validate(g: Symbol, spaces=DEFAULT_SPACES, params: CrossValParams | None = None) -> CrossValReport:
    """Density verdict against family lower bounds in each space.

    Bounded below means the family infimum on the base alpha-net is at least
    ``bound_min`` and pushing the net toward the boundary does not lower it
    by more than the fraction ``max_drop``. A verdict pair agrees when
    density holds exactly when S_g is bounded below; an inconclusive density
    verdict never agrees.
    """
    params = params or CrossValParams()
    spaces = list(spaces)
    if not spaces:
        raise ConfigError("at least one space is required", "spaces")
    dens = density_search(
        g,
        c_grid_from_factors(g, params.c_factors),
        params.eta_grid,
        center_net(params.separation, params.r_limit),
        params.delta_min,
    )
    dirs = probe_directions(g, params.directions)
    base_net = alpha_net(dirs, params.base_levels, True)
    fine_net = alpha_net(dirs, params.refine_levels, False)
    out = []
    for space in spaces:
        kw = dict(grid=params.grid, net=params.beta_net, n_boundary=params.n_boundary, workers=params.workers)
        base = lower_bound_estimate(g, space, family_for(space, base_net), **kw)
        fine = lower_bound_estimate(g, space, family_for(space, fine_net), **kw)
        inf_ref = min(base.inf_ratio, fine.inf_ratio)
        bounded = base.inf_ratio >= params.bound_min and inf_ref >= (1.0 - params.max_drop) * base.inf_ratio
        witness = base.witness if base.inf_ratio <= fine.inf_ratio else fine.witness
        agree = None if dens.verdict == "inconclusive" else (dens.verdict == "holds") == bounded
        out.append(SpaceVerdict(space, base.inf_ratio, inf_ref, witness, bounded, agree, base.ratios + fine.ratios))
    return CrossValReport(dens, out, params)


CANONICAL_SYMBOLS = (
    ("const_1", {"kind": "const", "value": [1.0, 0.0]}),
    ("z", {"kind": "polynomial", "coeffs": [[0.0, 0.0], [1.0, 0.0]]}),
    ("blaschke_0.5", {"kind": "blaschke", "zeros": [[0.5, 0.0]]}),
    ("blaschke_0.5_-0.5", {"kind": "blaschke", "zeros": [[0.5, 0.0], [-0.5, 0.0]]}),
    ("one_minus_z_half", {"kind": "rational", "num": [[1.0, 0.0], [-1.0, 0.0]], "den": [[2.0, 0.0]]}),
    ("three_plus_z_quarter", {"kind": "rational", "num": [[3.0, 0.0], [1.0, 0.0]], "den": [[4.0, 0.0]]}),
)
