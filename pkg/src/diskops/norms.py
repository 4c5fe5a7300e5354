"""Numerical norms on the Hardy, BMOA, Q_p, Besov and weighted Bergman spaces.

Derivative-based norms are evaluated from the exact derivative of the symbol
on a ``PolarGrid``. The batched entry point :func:`space_norms` evaluates many
functions on one grid at once; the single-function helpers wrap it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, NumericalFailure
from .nets import CenterNet, default_beta_net
from .quadrature import DEFAULT_R_MAX, PolarGrid, default_grid, stolz_integrals
from .symbols import Symbol, derivative, evaluate

SPACES = ("hardy", "hardy-calderon", "bmoa", "qp", "besov", "bergman")
DERIVATIVE_SPACES = ("hardy-calderon", "bmoa", "qp", "besov")


@dataclass(frozen=True)
class SpaceSpec:
    space: str
    p: float = 2.0
    gamma: float = 0.0
    aperture: float = 0.5

    def __post_init__(self):
        s, p = self.space, float(self.p)
        if s not in SPACES:
            raise ConfigError(f"unknown space {s!r}; expected one of {SPACES}", "space")
        if s in ("hardy", "hardy-calderon") and not 1.0 <= p < math.inf:
            raise ConfigError("Hardy exponent must satisfy 1 <= p < inf", "p")
        if s == "besov" and not 1.0 < p < math.inf:
            raise ConfigError("Besov exponent must satisfy 1 < p < inf", "p")
        if s == "qp" and not 0.0 < p < math.inf:
            raise ConfigError("Q_p exponent must be positive", "p")
        if s == "bergman":
            if p < 1.0:
                raise ConfigError("Bergman exponent must be >= 1", "p")
            if not self.gamma > -1.0:
                raise ConfigError("Bergman weight needs gamma > -1", "gamma")
        if not 0.0 < self.aperture < 1.0:
            raise ConfigError("aperture must lie in (0, 1)", "aperture")

    def label(self) -> str:
        if self.space == "bmoa":
            return "BMOA"
        if self.space == "bergman":
            return f"A^{self.p:g}_{self.gamma:g}"
        if self.space == "hardy-calderon":
            return f"H^{self.p:g} (aperture {self.aperture:g})"
        return {"hardy": "H", "qp": "Q", "besov": "B"}[self.space] + f"^{self.p:g}"

    def to_json(self) -> dict:
        return {"space": self.space, "p": self.p, "gamma": self.gamma, "aperture": self.aperture}


@dataclass
class NormResult:
    value: float
    space: SpaceSpec
    grid_meta: dict = field(default_factory=dict)
    sup_witness: complex | None = None

    def to_json(self) -> dict:
        out = {"value": self.value, "space": self.space.to_json(), "grid": self.grid_meta}
        if self.sup_witness is not None:
            out["sup_witness"] = [self.sup_witness.real, self.sup_witness.imag]
        return out


# ----------------------------------------------------------- Moebius kernels


def _moebius_kernel(rho, r, cos_t, power):
    """((1 - rho^2) / |1 - conj(b) z|^2)^power for |b| = rho, |z| = r."""
    k = (1.0 - rho * rho) / (1.0 - 2.0 * rho * r * cos_t + (rho * r) ** 2)
    return k if power == 1.0 else k ** power


def _kernel_integrals_direct(values, grid, points, power, chunk=64):
    z = grid.points
    out = np.empty((len(points), values.shape[1]))
    for s in range(0, len(points), chunk):
        b = points[s : s + chunk, None]
        k = (1.0 - np.abs(b) ** 2) / np.abs(1.0 - np.conj(b) * z[None, :]) ** 2
        if power != 1.0:
            k = k ** power
        out[s : s + chunk] = k @ values
    return out


def _kernel_integrals_fft(values, grid, net: CenterNet, power):
    """Kernel integrals at every net point via per-ring circular correlation.

    On a grid ring and a net ring the kernel depends only on the angle
    difference, so the sum over the ring is a circular correlation. Each grid
    ring is transformed once; its spectrum is multiplied by the kernel
    spectrum on the common lattice of length L = lcm(n, M) and folded down to
    the M net angles, where the ring contributions accumulate.
    """
    m = values.shape[1]
    acc = [np.zeros((M, m), dtype=complex) for M in net.counts]
    for i, n in enumerate(grid.counts):
        n = int(n)
        spec = np.fft.fft(values[grid.offsets[i] : grid.offsets[i + 1]], axis=0)
        r = grid.radii[i]
        for k, (rho, M) in enumerate(zip(net.radii, net.counts)):
            L = math.lcm(n, M)
            d = np.arange(L)
            kern = _moebius_kernel(rho, r, np.cos(2.0 * math.pi * d / L + math.pi / n), power)
            x = np.conj(np.fft.fft(kern))[:, None]
            x = (np.tile(spec, (L // n, 1)) if L > n else spec) * x
            acc[k] += x.reshape(L // M, M, m).sum(axis=0) / (L // M)
    return np.concatenate([np.fft.ifft(a, axis=0).real for a in acc], axis=0)


def _fft_ok(grid, net):
    if not isinstance(net, CenterNet):
        return False
    biggest = max(int(grid.counts.max()), max(net.counts))
    return all(math.lcm(int(n), M) <= 4 * biggest for n in set(grid.counts.tolist()) for M in net.counts)


def kernel_integrals(values, grid: PolarGrid, net, power: float = 1.0, method: str = "auto"):
    """Integrals of Moebius-kernel-weighted cell ``values`` at each net point.

    ``values`` has shape (cells,) or (cells, m) and already carries every
    factor except the kernel and the cell weight. Returns (net size, m).
    """
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    values = values * grid.weights[:, None]
    if method == "auto":
        method = "fft" if _fft_ok(grid, net) else "direct"
    if method == "fft":
        return _kernel_integrals_fft(values, grid, net, power)
    points = net.points if isinstance(net, CenterNet) else np.asarray(list(net), dtype=complex)
    return _kernel_integrals_direct(values, grid, points, power)


def _net_points(net):
    return net.points if isinstance(net, CenterNet) else np.asarray(list(net), dtype=complex)


# ------------------------------------------------------------ batched norms


def _derivative_part(space: SpaceSpec, d: np.ndarray, grid: PolarGrid, net, n_boundary: int):
    """Derivative part of each norm to the power used in its definition.

    ``d`` holds derivatives on the grid, shape (cells, m). Returns
    (parts, witnesses) where witnesses is None except for the sup norms.
    """
    r = grid.abs_points
    dd = np.abs(d) ** 2
    p = float(space.p)
    if space.space == "hardy-calderon":
        thetas = 2.0 * math.pi * np.arange(n_boundary) / n_boundary
        parts = []
        for j in range(dd.shape[1]):
            inner = stolz_integrals(dd[:, j], grid, space.aperture, thetas)
            parts.append(float(np.mean(inner ** (p / 2.0))))
        return np.asarray(parts), None
    if space.space == "besov":
        w = (1.0 - r * r) ** (p - 2.0) * grid.weights
        return (np.abs(d) ** p * w[:, None]).sum(axis=0), None
    if space.space in ("bmoa", "qp"):
        if space.space == "bmoa":
            vals = dd * np.log(1.0 / r)[:, None]
            power = 1.0
        else:
            vals = dd * ((1.0 - r * r) ** p)[:, None]
            power = p
        table = kernel_integrals(vals, grid, net, power)
        idx = np.argmax(table, axis=0)
        pts = _net_points(net)
        return table[idx, np.arange(table.shape[1])], [complex(pts[k]) for k in idx]
    raise ConfigError(f"{space.space} is not derivative-based", "space")


def _finite(x, what):
    if not np.all(np.isfinite(x)):
        raise NumericalFailure(f"non-finite {what}")
    return x


def derivative_norms(
    space: SpaceSpec,
    values_at_zero,
    derivs,
    grid: PolarGrid,
    net=None,
    n_boundary: int = 1024,
):
    """Norms from f(0) values and derivative samples (cells, m) on ``grid``."""
    derivs = np.asarray(derivs, dtype=complex)
    if derivs.ndim == 1:
        derivs = derivs[:, None]
    if net is None and space.space in ("bmoa", "qp"):
        net = default_beta_net()
    parts, wit = _derivative_part(space, derivs, grid, net, n_boundary)
    f0 = np.abs(np.asarray(values_at_zero, dtype=complex))
    if space.space in ("bmoa", "qp"):
        vals = np.sqrt(f0 ** 2 + parts)
    else:
        vals = (f0 ** space.p + parts) ** (1.0 / space.p)
    _finite(vals, "norm")
    meta = grid.meta()
    if net is not None and space.space in ("bmoa", "qp"):
        meta = dict(meta, net=net.meta() if isinstance(net, CenterNet) else {"size": len(_net_points(net))})
    if space.space == "hardy-calderon":
        meta = dict(meta, n_boundary=n_boundary)
    return [
        NormResult(float(v), space, meta, None if wit is None else wit[j])
        for j, v in enumerate(vals)
    ]


def space_norms(
    fs,
    space: SpaceSpec,
    grid: PolarGrid | None = None,
    net=None,
    n_boundary: int = 1024,
    n_circle: int = 4096,
    r_max: float | None = None,
):
    """Norms of every symbol in ``fs`` in ``space``."""
    fs = list(fs)
    grid = grid or default_grid()
    if space.space == "hardy":
        return [hardy_classical(f, space.p, n_circle, r_max or grid.r_max) for f in fs]
    if space.space == "bergman":
        return [bergman_norm(f, space.p, space.gamma, grid) for f in fs]
    z = grid.points
    derivs = np.stack([derivative(f, z) for f in fs], axis=1)
    f0 = [evaluate(f, 0.0) for f in fs]
    return derivative_norms(space, f0, derivs, grid, net, n_boundary)


# ------------------------------------------------------- single-function API


def hardy_classical(f: Symbol, p: float = 2.0, n: int = 4096, r_max: float = DEFAULT_R_MAX) -> NormResult:
    """(mean over |z| = r_max of |f|^p)^(1/p); circle means increase with r."""
    spec = SpaceSpec("hardy", p)
    theta = 2.0 * math.pi * np.arange(n) / n
    with np.errstate(over="ignore"):
        vals = _finite(np.abs(evaluate(f, r_max * np.exp(1j * theta))) ** p, "circle mean")
    return NormResult(float(np.mean(vals)) ** (1.0 / p), spec, {"r_max": r_max, "n_circle": n})


def hardy_calderon(f: Symbol, p: float = 2.0, beta: float = 0.5, grid=None, n_boundary: int = 1024) -> NormResult:
    return space_norms([f], SpaceSpec("hardy-calderon", p, aperture=beta), grid, n_boundary=n_boundary)[0]


def h2_littlewood_paley(f: Symbol, grid=None) -> float:
    """|f(0)|^2 + 2 * integral of |f'|^2 log(1/|z|); equals the squared H^2 norm."""
    grid = grid or default_grid()
    with np.errstate(over="ignore"):
        dd = _finite(np.abs(derivative(f, grid.points)) ** 2, "square function")
    area = 2.0 * float(np.dot(dd * np.log(1.0 / grid.abs_points), grid.weights))
    return abs(evaluate(f, 0.0)) ** 2 + area


def bmoa_kernel_integral(f: Symbol, beta: complex, grid=None) -> float:
    grid = grid or default_grid()
    dd = np.abs(derivative(f, grid.points)) ** 2 * np.log(1.0 / grid.abs_points)
    return float(kernel_integrals(dd, grid, [complex(beta)], 1.0, "direct")[0, 0])


def qp_kernel_integral(f: Symbol, p: float, beta: complex, grid=None) -> float:
    grid = grid or default_grid()
    r = grid.abs_points
    dd = np.abs(derivative(f, grid.points)) ** 2 * (1.0 - r * r) ** p
    return float(kernel_integrals(dd, grid, [complex(beta)], p, "direct")[0, 0])


def bmoa_norm(f: Symbol, beta_net=None, grid=None) -> NormResult:
    return space_norms([f], SpaceSpec("bmoa"), grid, beta_net)[0]


def qp_norm(f: Symbol, p: float, beta_net=None, grid=None) -> NormResult:
    return space_norms([f], SpaceSpec("qp", p), grid, beta_net)[0]


def besov_norm(f: Symbol, p: float, grid=None) -> NormResult:
    return space_norms([f], SpaceSpec("besov", p), grid)[0]


def bergman_norm(f: Symbol, p: float, gamma: float, grid=None) -> NormResult:
    spec = SpaceSpec("bergman", p, gamma)
    grid = grid or default_grid()
    r = grid.abs_points
    with np.errstate(over="ignore"):
        vals = _finite(np.abs(evaluate(f, grid.points)) ** p * (1.0 - r * r) ** gamma, "Bergman integrand")
    total = float(_finite(np.dot(vals, grid.weights), "Bergman integral"))
    return NormResult(total ** (1.0 / p), spec, grid.meta())
