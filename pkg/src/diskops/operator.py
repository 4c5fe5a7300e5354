"""The integral operator S_g f(z) = int_0^z f'(w) g(w) dw and its test families."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .geometry import as_disk_point
from .norms import DERIVATIVE_SPACES, SpaceSpec, _finite, derivative_norms, space_norms
from .quadrature import PolarGrid, as_region, default_grid, integrate_segment
from .symbols import BlaschkeProduct, Const, Polynomial, Rational, Sum, Symbol, derivative, evaluate

# ------------------------------------------------------------------ S_g


def sg_derivative(g: Symbol, f: Symbol, z):
    """(S_g f)'(z) = f'(z) g(z)."""
    return derivative(f, z) * evaluate(g, z)


def sg_apply(g: Symbol, f: Symbol, z, panels: int = 16, graded: bool = False):
    """S_g f(z) by Gauss-Legendre along the segment [0, z]."""
    return integrate_segment(lambda w: sg_derivative(g, f, w), z, panels, graded)


class SgImage(Symbol):
    """S_g f as a symbol: exact derivative, value by path integration."""

    kind = "sg_image"

    def __init__(self, g: Symbol, f: Symbol, panels: int = 24, chunk: int = 65536):
        self.g, self.f = g, f
        self.panels, self.chunk = panels, chunk

    @property
    def depth(self):
        return 1 + max(self.g.depth, self.f.depth)

    def _value(self, z):
        z = np.asarray(z, dtype=complex)
        flat = z.ravel()
        out = np.empty(flat.shape, dtype=complex)
        for s in range(0, flat.size, self.chunk):
            out[s : s + self.chunk] = integrate_segment(
                lambda w: self.f._deriv(w) * self.g._value(w),
                flat[s : s + self.chunk],
                self.panels,
                graded=True,
            )
        return out.reshape(z.shape)

    def _deriv(self, z):
        return self.f._deriv(z) * self.g._value(z)

    def to_json(self):
        return {"kind": "sg_image", "g": self.g.to_json(), "f": self.f.to_json()}


# ------------------------------------------------------------ test functions


def moebius_test(alpha) -> Symbol:
    """psi_alpha - alpha, which vanishes at the origin."""
    alpha = as_disk_point(alpha, "alpha")
    return Sum([BlaschkeProduct([alpha]), Const(-alpha)])


class BesovTest(Symbol):
    """f(z) = p/(2 conj(a)) (1-|a|^2)^(2/p) ((1 - conj(a) z)^(-2/p) - 1).

    Its derivative is (1-|a|^2)^(2/p) (1 - conj(a) z)^(-2/p - 1), principal
    branch (Re(1 - conj(a) z) > 0 on the disk), and f(0) = 0.
    """

    kind = "besov_test"

    def __init__(self, alpha, p: float):
        alpha = as_disk_point(alpha, "alpha")
        if alpha == 0:
            raise ConfigError("the Besov test function needs alpha != 0", "alpha")
        if not 1.0 < p < math.inf:
            raise ConfigError("Besov exponent must satisfy 1 < p < inf", "p")
        self.alpha, self.p = alpha, float(p)
        self._scale = (1.0 - abs(alpha) ** 2) ** (2.0 / p)

    def _value(self, z):
        ab = np.conj(self.alpha)
        q = 2.0 / self.p
        return self._scale / (q * ab) * ((1.0 - ab * z) ** (-q) - 1.0)

    def _deriv(self, z):
        ab = np.conj(self.alpha)
        return self._scale * (1.0 - ab * np.asarray(z)) ** (-2.0 / self.p - 1.0)

    def to_json(self):
        return {"kind": "besov_test", "alpha": [self.alpha.real, self.alpha.imag], "p": self.p}


def besov_test(alpha, p: float) -> BesovTest:
    return BesovTest(alpha, p)


def peaked_test(beta, power: int = 3) -> Rational:
    """1 / (1 - conj(beta) z)^power, peaked near beta/|beta| as |beta| -> 1."""
    beta = as_disk_point(beta, "beta")
    den = np.array([1.0 + 0j])
    for _ in range(power):
        den = np.convolve(den, [1.0, -np.conj(beta)])
    return Rational([1.0], den)


# ------------------------------------------------------------------- RNG


class Lcg64:
    """64-bit linear congruential generator.

    state <- (6364136223846793005 * state + 1442695040888963407) mod 2^64,
    seeded with state = seed mod 2^64; each draw advances the state once and
    returns (state >> 11) / 2^53 in [0, 1).
    """

    A = 6364136223846793005
    C = 1442695040888963407
    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = int(seed) & self.MASK

    def uniform(self) -> float:
        self.state = (self.A * self.state + self.C) & self.MASK
        return (self.state >> 11) / float(1 << 53)

    def complex_square(self) -> complex:
        """Uniform on [-1, 1) x [-1, 1); real part drawn first."""
        re = 2.0 * self.uniform() - 1.0
        im = 2.0 * self.uniform() - 1.0
        return complex(re, im)


def random_polynomials(count: int, maxdeg: int, seed: int):
    """Polynomials vanishing at 0 with coefficients 1..maxdeg drawn in order."""
    rng = Lcg64(seed)
    out = []
    for _ in range(count):
        coeffs = [0j] + [rng.complex_square() for _ in range(maxdeg)]
        out.append(Polynomial(coeffs))
    return out


# --------------------------------------------------------------- families

FAMILY_KINDS = ("moebius", "besov", "monomials", "random", "peaked")


@dataclass(frozen=True)
class TestFamily:
    __test__ = False  # not a pytest class

    kind: str
    alpha_net: tuple = ()
    p: float = 2.0
    maxdeg: int = 4
    count: int = 8
    seed: int | None = None
    power: int = 3

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise ConfigError(f"unknown family {self.kind!r}", "family")
        object.__setattr__(self, "alpha_net", tuple(complex(a) for a in self.alpha_net))
        if self.kind in ("moebius", "besov", "peaked") and not self.alpha_net:
            raise ConfigError("parametric family needs a nonempty alpha net", "alpha_net")
        if self.kind == "random" and self.seed is None:
            raise ConfigError("random family needs a seed", "seed")

    def members(self):
        """List of (label, symbol) in family order."""
        if self.kind == "moebius":
            return [(f"psi[{_fmt(a)}]-alpha", moebius_test(a)) for a in self.alpha_net]
        if self.kind == "besov":
            return [(f"f_alpha[{_fmt(a)}]", besov_test(a, self.p)) for a in self.alpha_net]
        if self.kind == "peaked":
            return [(f"peak[{_fmt(a)}]", peaked_test(a, self.power)) for a in self.alpha_net]
        if self.kind == "monomials":
            return [(f"z^{k}", Polynomial([0] * k + [1])) for k in range(1, self.maxdeg + 1)]
        polys = random_polynomials(self.count, self.maxdeg, self.seed)
        return [(f"random[{k}]", f) for k, f in enumerate(polys)]

    def to_json(self):
        return {
            "kind": self.kind,
            "alpha_net": [[a.real, a.imag] for a in self.alpha_net],
            "p": self.p,
            "maxdeg": self.maxdeg,
            "count": self.count,
            "seed": self.seed,
            "power": self.power,
        }


def _fmt(a: complex) -> str:
    return f"{a.real:.6g}" if a.imag == 0 else f"{a.real:.6g}{a.imag:+.6g}j"


@dataclass
class LowerBoundReport:
    inf_ratio: float
    witness: str
    ratios: list = field(default_factory=list)
    space: SpaceSpec | None = None

    def to_json(self):
        return {
            "inf_ratio": self.inf_ratio,
            "witness": self.witness,
            "ratios": [{"member": k, "ratio": r} for k, r in self.ratios],
            "space": None if self.space is None else self.space.to_json(),
        }


def _centered(f: Symbol) -> Symbol:
    f0 = evaluate(f, 0.0)
    return f if f0 == 0 else Sum([f, Const(-f0)])


def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def lower_bound_estimate(
    g: Symbol,
    space: SpaceSpec,
    family: TestFamily,
    grid: PolarGrid | None = None,
    net=None,
    n_boundary: int = 1024,
    batch: int = 4,
    workers: int = 1,
) -> LowerBoundReport:
    """Family infimum of ||S_g f|| / ||f|| in ``space``.

    Derivative-based norms use (S_g f)' = f' g on the grid directly; the
    classical Hardy and Bergman norms evaluate S_g f by path integration.
    """
    grid = grid or default_grid()
    members = [(k, _centered(f)) for k, f in family.members()]
    z = grid.points

    if space.space in DERIVATIVE_SPACES:
        gz = evaluate(g, z)

        def run(chunk):
            d = np.stack([derivative(f, z) for _, f in chunk], axis=1)
            both = np.concatenate([d, d * gz[:, None]], axis=1)
            res = derivative_norms(space, np.zeros(both.shape[1]), both, grid, net, n_boundary)
            m = len(chunk)
            return [(res[j].value, res[m + j].value) for j in range(m)]

    else:

        def run(chunk):
            fs = [f for _, f in chunk]
            base = space_norms(fs, space, grid)
            img = space_norms([SgImage(g, f) for f in fs], space, grid)
            return [(b.value, i.value) for b, i in zip(base, img)]

    chunks = [members[s : s + batch] for s in range(0, len(members), batch)]
    pairs = [pr for part in _map(run, chunks, workers) for pr in part]
    ratios = []
    for (label, _), (base, img) in zip(members, pairs):
        if not base > 0:
            raise ConfigError(f"family member {label} has zero norm", "family")
        ratios.append((label, img / base))
    k = int(np.argmin([r for _, r in ratios]))
    return LowerBoundReport(ratios[k][1], ratios[k][0], ratios, space)


def reverse_carleson_ratio(
    region,
    p: float,
    gamma: float,
    family: TestFamily,
    grid: PolarGrid | None = None,
) -> LowerBoundReport:
    """Family infimum of the G-restricted over the full weighted Bergman integral."""
    spec = SpaceSpec("bergman", p, gamma)
    grid = grid or default_grid()
    r = grid.abs_points
    weight = (1.0 - r * r) ** gamma * grid.weights
    mask = as_region(region)(grid.points)
    ratios = []
    for label, f in family.members():
        with np.errstate(over="ignore"):
            vals = _finite(np.abs(evaluate(f, grid.points)) ** p * weight, f"Bergman integrand of {label}")
        full = float(vals.sum())
        if not full > 0:
            raise ConfigError(f"family member {label} has zero norm", "family")
        ratios.append((label, float(vals[mask].sum()) / full))
    k = int(np.argmin([x for _, x in ratios]))
    return LowerBoundReport(ratios[k][1], ratios[k][0], ratios, spec)
