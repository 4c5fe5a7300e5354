"""Pseudo-hyperbolically separated nets of centers in the disk."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import ConfigError, ResourceLimit

DEFAULT_NET_CAP = 2_000_000


@dataclass(frozen=True, eq=False)
class CenterNet:
    """Net made of concentric rings; ring k holds ``counts[k]`` points at angles 2*pi*j/count."""

    radii: tuple
    counts: tuple
    separation: float
    r_limit: float

    @cached_property
    def points(self) -> np.ndarray:
        parts = [
            r * np.exp(2j * math.pi * np.arange(n) / n) if r > 0 else np.zeros(1, complex)
            for r, n in zip(self.radii, self.counts)
        ]
        return np.concatenate(parts)

    def __len__(self):
        return int(sum(self.counts))

    def __iter__(self):
        return iter(self.points.tolist())

    def meta(self) -> dict:
        return {
            "separation": self.separation,
            "r_limit": self.r_limit,
            "rings": len(self.radii),
            "size": len(self),
        }


def _ring_count(r: float, rho_max: float) -> int:
    # smallest power of two whose half-step chord has pseudo-distance <= rho_max
    n = 1
    while True:
        d = math.pi / n
        rho = abs(r * (1 - np.exp(1j * d))) / abs(1 - r * r * np.exp(1j * d))
        if rho <= rho_max:
            return n
        n *= 2


def center_net(separation: float = 0.2, r_limit: float = 1.0 - 2.0 ** -10, cap: int = DEFAULT_NET_CAP) -> CenterNet:
    """Net covering {|a| <= r_limit} to pseudo-hyperbolic distance ``separation``.

    Rings sit at equal hyperbolic spacing H = 2 artanh(separation) out to
    exactly ``r_limit``; each ring gets enough points (a power of two) that
    every point of the ring is within hyperbolic distance H/2 of a net point.
    Radial plus angular slack stays within H, hence within ``separation``.
    """
    if not 0.0 < separation < 1.0:
        raise ConfigError("separation must lie in (0, 1)", "separation")
    if not 0.0 < r_limit < 1.0:
        raise ConfigError("r_limit must lie in (0, 1)", "r_limit")
    budget = 2.0 * math.atanh(separation)
    outer = 2.0 * math.atanh(r_limit)
    n_rings = max(1, math.ceil(outer / budget))
    rho_half = math.tanh(budget / 4.0)
    radii, counts = [0.0], [1]
    total = 1
    for j in range(1, n_rings + 1):
        r = math.tanh(j * outer / n_rings / 2.0)
        if j == n_rings:
            r = r_limit
        n = _ring_count(r, rho_half)
        total += n
        if total > cap:
            raise ResourceLimit(f"center net exceeds {cap} points")
        radii.append(r)
        counts.append(n)
    return CenterNet(tuple(radii), tuple(counts), float(separation), float(r_limit))


@lru_cache(maxsize=4)
def default_beta_net() -> CenterNet:
    return center_net(0.2, 1.0 - 2.0 ** -10)
