"""Geometry of the unit disk.

Points are plain Python/numpy complex numbers; every predicate accepts
scalars or arrays and broadcasts. Boundary points of the open regions are
classified as outside.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

TWO_PI = 2.0 * math.pi


def as_disk_point(z, name="z") -> complex:
    """Validate and return ``z`` as a complex number strictly inside the disk."""
    if isinstance(z, (list, tuple)) and len(z) == 2:
        z = complex(z[0], z[1])
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)) or abs(z) >= 1.0:
        raise ConfigError(f"point {z} is not in the open unit disk", name)
    return z


def canonical_angle(theta: float) -> float:
    """Representative of ``theta`` in [0, 2*pi)."""
    t = math.fmod(theta, TWO_PI)
    if t < 0:
        t += TWO_PI
    return 0.0 if t >= TWO_PI else t


def _check_unit_interval(value, name):
    value = float(value)
    if not 0.0 < value < 1.0:
        raise ConfigError(f"must lie in (0, 1), got {value}", name)
    return value


@dataclass(frozen=True)
class PseudoDisk:
    """Pseudo-hyperbolic disk {z : rho(center, z) < radius}."""

    center: complex
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_disk_point(self.center, "center"))
        object.__setattr__(self, "radius", _check_unit_interval(self.radius, "radius"))

    def contains(self, z):
        return in_pseudo_disk(self, z)

    def euclidean(self):
        return pseudo_disk_as_euclidean(self)

    def area(self):
        return pseudo_disk_area_exact(self)


@dataclass(frozen=True)
class EuclideanSubdisk:
    """Euclidean disk of center ``center`` and radius ``factor * (1 - |center|)``."""

    center: complex
    factor: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_disk_point(self.center, "center"))
        object.__setattr__(self, "factor", _check_unit_interval(self.factor, "factor"))

    @property
    def radius(self) -> float:
        return self.factor * (1.0 - abs(self.center))

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def euclidean(self):
        return self.center, self.radius

    def area(self):
        return euclidean_subdisk_area(self)


@dataclass(frozen=True)
class StolzAngle:
    """Cone-like approach region with vertex exp(i*theta) and aperture in (0, 1)."""

    theta: float
    aperture: float

    def __post_init__(self):
        object.__setattr__(self, "theta", canonical_angle(float(self.theta)))
        object.__setattr__(self, "aperture", _check_unit_interval(self.aperture, "aperture"))

    @property
    def vertex(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))

    def contains(self, z):
        return in_stolz_angle(self, z)


def pseudo_distance(z, w):
    """rho(z, w) = |z - w| / |1 - conj(z) w|."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    # real form of 1 - conj(z) w; swapping z and w only flips the sign of im
    re = z.real * w.real + z.imag * w.imag
    im = z.real * w.imag - z.imag * w.real
    out = np.abs(z - w) / np.hypot(1.0 - re, im)
    return float(out) if out.ndim == 0 else out


def moebius_psi(alpha, z):
    """The involution psi_alpha(z) = (alpha - z) / (1 - conj(alpha) z)."""
    z = np.asarray(z, dtype=complex)
    out = (alpha - z) / (1.0 - np.conj(alpha) * z)
    return complex(out) if out.ndim == 0 else out


def in_pseudo_disk(d: PseudoDisk, z):
    out = pseudo_distance(d.center, z) < d.radius
    return bool(out) if np.ndim(out) == 0 else out


def pseudo_disk_as_euclidean(d: PseudoDisk):
    """Euclidean (center, radius) of the pseudo-hyperbolic disk ``d``."""
    a, eta = d.center, d.radius
    s = 1.0 - eta * eta * abs(a) ** 2
    return a * (1.0 - eta * eta) / s, eta * (1.0 - abs(a) ** 2) / s


def pseudo_disk_area_exact(d: PseudoDisk) -> float:
    """Normalized area eta^2 (1-|a|^2)^2 / (1 - eta^2 |a|^2)^2."""
    r2 = abs(d.center) ** 2
    eta2 = d.radius * d.radius
    return eta2 * (1.0 - r2) ** 2 / (1.0 - eta2 * r2) ** 2


def euclidean_subdisk_area(d: EuclideanSubdisk) -> float:
    return d.factor ** 2 * (1.0 - abs(d.center)) ** 2


def stolz_gauge(vertex, z):
    """Smallest aperture whose Stolz angle at ``vertex`` contains ``z`` (as a closure).

    Minimizes |z - (1-t) vertex| / t over t in (0, 1]. With s = 1/t the squared
    objective is |u|^2 s^2 + 2 b s + 1 where u = z - vertex and
    b + ic = u conj(vertex); its minimizer over s >= 1 is explicit.
    """
    z = np.asarray(z, dtype=complex)
    u = z - vertex
    uu = (u * np.conj(u)).real
    uv = u * np.conj(vertex)
    b, c = uv.real, uv.imag
    with np.errstate(divide="ignore", invalid="ignore"):
        s_star = -b / uu
        # 1 - b^2/|u|^2 written as c^2/|u|^2 (|vertex| = 1) to avoid cancellation
        interior = np.where(uu > 0, c * c / uu, 0.0)
    at_one = (z * np.conj(z)).real
    phi = np.where(s_star >= 1.0, interior, at_one)
    out = np.sqrt(np.clip(phi, 0.0, None))
    return float(out) if out.ndim == 0 else out


def in_stolz_angle(s: StolzAngle, z):
    z = np.asarray(z, dtype=complex)
    out = (stolz_gauge(s.vertex, z) < s.aperture) & (np.abs(z) < 1.0)
    return bool(out) if np.ndim(out) == 0 else out


def stolz_half_width(radius, aperture, iterations=60):
    """Angular half-width of a Stolz angle on the circle |z| = radius.

    For |z| < aperture the whole circle is inside (returns pi). Otherwise the
    intersection with the circle is the arc |arg z - arg vertex| < w; w is found
    by bisection on the gauge, vectorized over ``radius``.
    """
    radius = np.atleast_1d(np.asarray(radius, dtype=float))
    lo = np.zeros_like(radius)
    hi = np.full_like(radius, math.pi)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        inside = stolz_gauge(1.0, radius * np.exp(1j * mid)) < aperture
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    w = 0.5 * (lo + hi)
    w = np.where(radius < aperture, math.pi, w)
    return w


def inclusion_radius(eta: float) -> float:
    """Radius r = 2 eta / (1 + eta^2) with Delta_eta(alpha) inside D_r(alpha)."""
    eta = _check_unit_interval(eta, "eta")
    return 2.0 * eta / (1.0 + eta * eta)
