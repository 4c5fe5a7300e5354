"""Deterministic quadrature on the disk, its subregions, circles and segments.

The global grid is a polar midpoint rule with dyadic radial bands
[1 - 2^-(k-1), 1 - 2^-k]; band k carries ``base_angular * 2^k`` cells per ring
so cells stay roughly square as they approach the boundary. All sums run over
the flattened cell array in ring-major, then angular, order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import ConfigError, NumericalFailure, ResourceLimit
from .geometry import EuclideanSubdisk, PseudoDisk, StolzAngle, stolz_half_width

DEFAULT_R_MAX = 1.0 - 2.0 ** -14
DEFAULT_CELL_CAP = 10 ** 7


@dataclass(frozen=True, eq=False)
class PolarGrid:
    ring_inner: np.ndarray
    ring_outer: np.ndarray
    counts: np.ndarray
    r_max: float
    levels: int
    base_angular: int
    radial_sub: int

    @property
    def radii(self) -> np.ndarray:
        return 0.5 * (self.ring_inner + self.ring_outer)

    @property
    def n_cells(self) -> int:
        return int(self.counts.sum())

    @cached_property
    def offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum(self.counts)])

    @cached_property
    def ring_of_cell(self) -> np.ndarray:
        return np.repeat(np.arange(len(self.counts)), self.counts)

    @cached_property
    def angles(self) -> np.ndarray:
        parts = [(np.arange(n) + 0.5) * (2.0 * math.pi / n) for n in self.counts]
        return np.concatenate(parts)

    @cached_property
    def abs_points(self) -> np.ndarray:
        return self.radii[self.ring_of_cell]

    @cached_property
    def points(self) -> np.ndarray:
        return self.abs_points * np.exp(1j * self.angles)

    @cached_property
    def weights(self) -> np.ndarray:
        ring_w = (self.ring_outer ** 2 - self.ring_inner ** 2) / self.counts
        return ring_w[self.ring_of_cell]

    def meta(self) -> dict:
        return {
            "levels": self.levels,
            "base_angular": self.base_angular,
            "radial_sub": self.radial_sub,
            "r_max": self.r_max,
            "cells": self.n_cells,
        }


def make_grid(
    levels: int = 12,
    base_angular: int = 32,
    r_max: float = DEFAULT_R_MAX,
    radial_sub: int | None = None,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> PolarGrid:
    """Dyadic polar grid truncated at ``r_max``; total weight is r_max^2.

    Band edges are 2^-j (j = levels-1 .. 1) toward the origin, then
    1 - 2^-k (k = 2 .. levels-1) toward the boundary, then ``r_max``. Each band
    is cut into ``radial_sub`` rings (default ``max(2, levels // 2)``), so
    doubling ``levels`` also halves the relative ring width.
    """
    if levels < 1:
        raise ConfigError("levels must be >= 1", "levels")
    if base_angular < 4:
        raise ConfigError("base_angular must be >= 4", "base_angular")
    if radial_sub is None:
        radial_sub = max(2, levels // 2)
    if radial_sub < 1:
        raise ConfigError("radial_sub must be >= 1", "radial_sub")
    if not 0.0 < r_max < 1.0:
        raise ConfigError("r_max must lie in (0, 1)", "r_max")

    edges = [0.0] + [2.0 ** -j for j in range(levels - 1, 0, -1)]
    edges += [1.0 - 2.0 ** -k for k in range(2, levels)]
    edges = [e for e in edges if e < r_max] + [r_max]
    inner, outer, counts = [], [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        band = 1 if hi <= 0.5 else math.ceil(-math.log2(1.0 - hi))
        n_ang = base_angular * 2 ** min(levels, max(1, band))
        cuts = np.linspace(lo, hi, radial_sub + 1)
        inner.extend(cuts[:-1])
        outer.extend(cuts[1:])
        counts.extend([n_ang] * radial_sub)
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if total > cell_cap:
        raise ResourceLimit(f"grid needs {total} cells, cap is {cell_cap}")
    return PolarGrid(
        ring_inner=np.asarray(inner),
        ring_outer=np.asarray(outer),
        counts=counts,
        r_max=float(r_max),
        levels=int(levels),
        base_angular=int(base_angular),
        radial_sub=int(radial_sub),
    )


@lru_cache(maxsize=8)
def default_grid() -> PolarGrid:
    return make_grid()


def _checked(values, n=None):
    values = np.asarray(values, dtype=float)
    if n is not None and values.shape != (n,):
        values = np.broadcast_to(values, (n,))
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("non-finite integrand value on the grid")
    return values


class RegionIndicator:
    """Pure membership predicate; combine with ``&``, ``|`` and ``~``."""

    def __init__(self, predicate, label="region"):
        self.predicate = predicate
        self.label = label

    def __call__(self, z):
        return np.asarray(self.predicate(z), dtype=bool)

    def __and__(self, other):
        other = as_region(other)
        return RegionIndicator(lambda z: self(z) & other(z), f"({self.label} & {other.label})")

    def __or__(self, other):
        other = as_region(other)
        return RegionIndicator(lambda z: self(z) | other(z), f"({self.label} | {other.label})")

    def __invert__(self):
        return RegionIndicator(lambda z: ~self(z), f"~{self.label}")


def as_region(region) -> RegionIndicator:
    if isinstance(region, RegionIndicator):
        return region
    if hasattr(region, "contains"):
        return RegionIndicator(region.contains, repr(region))
    if callable(region):
        return RegionIndicator(region)
    raise ConfigError(f"not a region: {region!r}", "region")


WHOLE_DISK = RegionIndicator(lambda z: np.ones(np.shape(z), dtype=bool), "disk")


def integrate_disk(field, grid: PolarGrid) -> float:
    """Midpoint rule for the integral of ``field`` against normalized area."""
    values = _checked(field(grid.points), grid.n_cells)
    return float(np.dot(values, grid.weights))


def integrate_region(field, region, grid: PolarGrid) -> float:
    mask = as_region(region)(grid.points)
    values = _checked(field(grid.points), grid.n_cells)
    return float(np.dot(np.where(mask, values, 0.0), grid.weights))


def integrate_stolz(field, s: StolzAngle, grid: PolarGrid) -> float:
    return integrate_region(field, s, grid)


def stolz_integrals(values, grid: PolarGrid, aperture: float, thetas) -> np.ndarray:
    """Integrals of precomputed cell ``values`` over Stolz angles at each vertex angle.

    Uses that a Stolz angle meets each circle |z| = r in an arc centred on the
    vertex direction: each ring contributes a contiguous, wrapped run of its
    cells, summed through prefix sums. Agrees with ``integrate_stolz`` cell
    for cell.
    """
    values = _checked(values, grid.n_cells) * grid.weights
    thetas = np.asarray(thetas, dtype=float)
    half = stolz_half_width(grid.radii, aperture)
    out = np.zeros(thetas.shape)
    for i, n in enumerate(grid.counts):
        n = int(n)
        v = values[grid.offsets[i] : grid.offsets[i + 1]]
        if half[i] >= math.pi:
            out += v.sum()
            continue
        step = 2.0 * math.pi / n
        lo = np.floor((thetas - half[i]) / step - 0.5).astype(np.int64) + 1
        hi = np.ceil((thetas + half[i]) / step - 0.5).astype(np.int64) - 1
        count = np.clip(hi - lo + 1, 0, n)
        prefix = np.concatenate([[0.0], np.cumsum(np.concatenate([v, v]))])
        start = np.mod(lo, n)
        out += prefix[start + count] - prefix[start]
    return out


@lru_cache(maxsize=16)
def disk_template(levels: int = 32, angular: int = 6):
    """Polar midpoint rule on the unit disk with weights summing to one.

    Ring i of ``levels`` uniform rings carries max(8, angular*(i+1)) cells.
    """
    if levels < 1 or angular < 1:
        raise ConfigError("template needs levels >= 1 and angular >= 1", "resolution")
    pts, wts = [], []
    for i in range(levels):
        n = max(8, angular * (i + 1))
        r = (i + 0.5) / levels
        ang = (np.arange(n) + 0.5) * (2.0 * math.pi / n)
        pts.append(r * np.exp(1j * ang))
        wts.append(np.full(n, ((i + 1) ** 2 - i ** 2) / (levels ** 2 * n)))
    points = np.concatenate(pts)
    weights = np.concatenate(wts)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def subdisk_nodes(d, levels: int = 32, angular: int = 6):
    """Nodes and normalized-area weights of a local grid over a subdisk."""
    center, radius = d.euclidean()
    u, w = disk_template(levels, angular)
    return center + radius * u, w * radius ** 2


def integrate_subdisk(field, d: PseudoDisk | EuclideanSubdisk, levels: int = 32, angular: int = 6) -> float:
    """Integral over a subdisk on a local polar grid centred at its Euclidean centre."""
    z, w = subdisk_nodes(d, levels, angular)
    values = _checked(field(z), z.size)
    return float(np.dot(values, w))


def integrate_circle(field, radius: float, n: int = 4096) -> float:
    """Trapezoid rule for the normalized integral of field(theta) over a circle.

    ``field`` receives the angles; ``radius`` is validated and available to
    callers that close over it.
    """
    if not 0.0 < radius < 1.0:
        raise ConfigError("radius must lie in (0, 1)", "radius")
    if n < 1:
        raise ConfigError("n must be positive", "n")
    theta = 2.0 * math.pi * np.arange(n) / n
    values = _checked(field(theta), n)
    return float(values.mean())


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)


def segment_breakpoints(n: int, graded: bool = False) -> np.ndarray:
    """Panel breakpoints on [0, 1]; graded ones halve toward the endpoint."""
    if n < 1:
        raise ConfigError("n must be positive", "panels")
    if not graded:
        return np.linspace(0.0, 1.0, n + 1)
    return np.concatenate([1.0 - 2.0 ** -np.arange(n), [1.0]])


def integrate_segment(field, endpoint, n: int = 16, graded: bool = False):
    """Composite 8-point Gauss-Legendre for the integral of field(w) dw on [0, endpoint].

    ``endpoint`` may be an array; the result then has its shape.
    """
    endpoint = np.asarray(endpoint, dtype=complex)
    brk = segment_breakpoints(n, graded)
    a, b = brk[:-1], brk[1:]
    t = (0.5 * (b - a))[:, None] * _GL_NODES[None, :] + (0.5 * (a + b))[:, None]
    wt = (0.5 * (b - a))[:, None] * _GL_WEIGHTS[None, :]
    t, wt = t.ravel(), wt.ravel()
    w = endpoint[..., None] * t
    values = np.asarray(field(w), dtype=complex)
    values = np.broadcast_to(values, w.shape)
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("non-finite integrand on the segment")
    out = endpoint * (values @ wt)
    return complex(out) if out.ndim == 0 else out
