"""Local derivative statistics on Euclidean subdisks: E_lambda, B_lambda and the exceptional sets."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ConfigError
from ..geometry import as_disk_point, stolz_gauge, stolz_half_width
from ..quadrature import PolarGrid, disk_template, make_grid
from ..symbols import Symbol, derivative

LEMMA_TOL = 1e-3
LEMMA_RESOLUTION = (32, 6)
MASS_RESOLUTION = (12, 6)
# |f'(alpha)|^2 below this fraction of the subdisk mean counts as a zero of f'
DEGENERATE_REL = 1e-24


def _unit(x, name, hi=1.0):
    x = float(x)
    if not 0.0 < x < hi:
        raise ConfigError(f"{name} must lie in (0, {hi:g})", name)
    return x


@dataclass(frozen=True)
class LemmaSample:
    f: Symbol
    alpha: complex
    eta: float
    lam: float
    eps: float = 0.5

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_disk_point(self.alpha, "alpha"))
        _unit(self.eta, "eta")
        _unit(self.lam, "lambda")
        _unit(self.eps, "epsilon")


@dataclass
class SubdiskStats:
    """Per-centre statistics of |f'|^2 over Delta_eta(alpha)."""

    fa2: np.ndarray
    mean: np.ndarray
    e_ratio: np.ndarray
    b_lambda: np.ndarray
    degenerate: np.ndarray


def subdisk_stats(f: Symbol, alphas, eta: float, lam: float, resolution=LEMMA_RESOLUTION, chunk=1024) -> SubdiskStats:
    """|f'(alpha)|^2, the subdisk mean of |f'|^2, A(E)/A(Delta) and B_lambda at each alpha.

    E = {z in Delta : |f'(z)|^2 > lam |f'(alpha)|^2}. When |f'(alpha)| vanishes
    E is Delta minus the zeros of f', so its ratio is 1 and B_lambda is the mean.
    """
    alphas = np.atleast_1d(np.asarray(alphas, dtype=complex))
    u, w = disk_template(*resolution)
    w = w / w.sum()
    out = {k: np.empty(alphas.size) for k in ("fa2", "mean", "e_ratio", "b_lambda")}
    degenerate = np.empty(alphas.size, dtype=bool)
    for s in range(0, alphas.size, chunk):
        a = alphas[s : s + chunk]
        z = a[:, None] + (eta * (1.0 - np.abs(a)))[:, None] * u[None, :]
        dd = np.abs(derivative(f, z)) ** 2
        fa2 = np.abs(derivative(f, a)) ** 2
        mean = dd @ w
        deg = fa2 <= DEGENERATE_REL * mean
        mask = (dd > (lam * fa2)[:, None]) | deg[:, None]
        area = mask @ w
        rest = ~mask @ w
        mass = (dd * mask) @ w
        out["fa2"][s : s + chunk] = fa2
        out["mean"][s : s + chunk] = mean
        out["e_ratio"][s : s + chunk] = np.where(deg, 1.0, area / (area + rest))
        out["b_lambda"][s : s + chunk] = np.where(area > 0, mass / np.where(area > 0, area, 1.0), 0.0)
        degenerate[s : s + chunk] = deg
    return SubdiskStats(degenerate=degenerate, **out)


@dataclass
class ELambda:
    ratio: float
    b_lambda: float
    degenerate: bool


def e_lambda_ratio(s: LemmaSample, resolution=LEMMA_RESOLUTION) -> ELambda:
    """A(E_lambda(alpha)) / A(Delta_eta(alpha)) and the mean B_lambda of |f'|^2 over E."""
    st = subdisk_stats(s.f, [s.alpha], s.eta, s.lam, resolution)
    return ELambda(float(st.e_ratio[0]), float(st.b_lambda[0]), bool(st.degenerate[0]))


@dataclass
class LemmaCheck:
    lhs: float
    rhs: float
    holds: bool
    degenerate: bool = False


def luecking_lemma_check(s: LemmaSample, resolution=LEMMA_RESOLUTION, tol: float = LEMMA_TOL) -> LemmaCheck:
    """A(E)/A(Delta) >= log(1/lam) / (log(B_lambda / |f'(alpha)|^2) + log(1/lam)).

    A vanishing f'(alpha) makes the bound vacuous; it is reported as holding
    with the degenerate flag set.
    """
    st = subdisk_stats(s.f, [s.alpha], s.eta, s.lam, resolution)
    lhs = float(st.e_ratio[0])
    if st.degenerate[0]:
        return LemmaCheck(lhs, 0.0, True, True)
    log_inv = math.log(1.0 / s.lam)
    rhs = log_inv / (math.log(st.b_lambda[0] / st.fa2[0]) + log_inv)
    return LemmaCheck(lhs, rhs, lhs >= rhs - tol, False)


KINDS = ("A", "B")


def _members(kind, st: SubdiskStats, eps):
    if kind == "A":
        return st.fa2 < eps * st.mean
    if kind == "B":
        return st.fa2 < eps ** 3 * st.b_lambda
    raise ConfigError(f"unknown exceptional set {kind!r}; expected A or B", "kind")


def exceptional_set_member(
    kind: str,
    f: Symbol,
    alpha,
    eps: float,
    eta: float,
    lam: float = 0.25,
    resolution=LEMMA_RESOLUTION,
):
    """Membership of alpha in A (|f'(alpha)|^2 < eps * mean over Delta of |f'|^2)
    or B (|f'(alpha)|^2 < eps^3 * B_lambda f(alpha)). Accepts arrays of alpha."""
    _unit(eps, "epsilon")
    _unit(eta, "eta")
    _unit(lam, "lambda")
    scalar = np.ndim(alpha) == 0
    if scalar:
        alpha = as_disk_point(alpha, "alpha")
    st = subdisk_stats(f, alpha, eta, lam, resolution)
    out = _members(kind, st, eps)
    return bool(out[0]) if scalar else out


def default_beta_prime(beta: float, eta: float, radii: int = 256, angles: int = 64, ring: int = 128) -> float:
    """Smallest probed aperture whose Stolz angle holds every Delta_eta(alpha), alpha in the beta angle.

    Probes centres on the edge of the beta angle at vertex 1 (where the
    subdisks stick out furthest) and in its core, and takes the largest
    Stolz gauge over the boundary circles of their subdisks.
    """
    _unit(beta, "beta")
    _unit(eta, "eta")
    r = np.concatenate([np.linspace(0.0, 0.5, radii // 4, endpoint=False), 1.0 - 2.0 ** -np.linspace(1.0, 24.0, radii)])
    half = stolz_half_width(r, beta) * (1.0 - 1e-12)
    phi = np.linspace(-1.0, 1.0, angles)
    centers = (r[:, None] * np.exp(1j * half[:, None] * phi[None, :])).ravel()
    circle = np.exp(2j * math.pi * np.arange(ring) / ring)
    z = centers[:, None] + (eta * (1.0 - np.abs(centers)))[:, None] * circle[None, :]
    gauge = float(np.max(stolz_gauge(1.0, z)))
    if not gauge < 1.0:
        raise ConfigError("subdisks reach the boundary outside every Stolz angle", "beta_prime")
    return min(gauge * (1.0 + 1e-9), 1.0 - 1e-12)


def exceptional_mass_ratio(
    kind: str,
    f: Symbol,
    zeta: float,
    beta: float,
    beta_prime: float | None = None,
    eps: float = 0.5,
    eta: float = 0.5,
    lam: float = 0.25,
    grid: PolarGrid | None = None,
    resolution=MASS_RESOLUTION,
) -> float:
    """(integral of |f'|^2 over S within the beta angle) / (eps * integral over the beta' angle).

    S is the exceptional set A or B; ``zeta`` is the vertex angle.
    """
    _unit(beta, "beta")
    if beta_prime is None:
        beta_prime = default_beta_prime(beta, eta)
    _unit(beta_prime, "beta_prime")
    if not beta < beta_prime:
        raise ConfigError("beta_prime must exceed beta", "beta_prime")
    _unit(eps, "epsilon")
    grid = grid or _mass_grid()
    vertex = complex(math.cos(zeta), math.sin(zeta))
    z = grid.points
    gauge = stolz_gauge(vertex, z)
    inner = gauge < beta
    outer = gauge < beta_prime
    dd = np.abs(derivative(f, z)) ** 2 * grid.weights
    den = eps * float(dd[outer].sum())
    if not den > 0:
        raise ConfigError("f' vanishes on the outer Stolz angle", "f")
    cand = np.flatnonzero(inner)
    st = subdisk_stats(f, z[cand], eta, lam, resolution)
    member = _members(kind, st, eps)
    return float(dd[cand[member]].sum()) / den


@lru_cache(maxsize=1)
def _mass_grid() -> PolarGrid:
    return make_grid(levels=10, base_angular=16)


__all__ = [
    "ELambda",
    "LemmaCheck",
    "LemmaSample",
    "SubdiskStats",
    "default_beta_prime",
    "e_lambda_ratio",
    "exceptional_mass_ratio",
    "exceptional_set_member",
    "luecking_lemma_check",
    "subdisk_stats",
]
