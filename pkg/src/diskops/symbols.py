"""Analytic functions on the disk as immutable expression trees.

Every node evaluates itself and its exact complex derivative on numpy arrays,
so downstream quadratures never carry truncation error from the symbol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import ConfigError, NumericalFailure
from .geometry import as_disk_point

MAX_DEPTH = 32
DEFAULT_R_MAX = 1.0 - 2.0 ** -14
_BOUNDARY_CHECK_POINTS = 4096


class Symbol:
    """Base class for expression nodes."""

    kind = "symbol"

    def _value(self, z):
        raise NotImplementedError

    def _deriv(self, z):
        raise NotImplementedError

    @property
    def depth(self) -> int:
        return 1

    def to_json(self) -> dict:
        raise NotImplementedError

    def __call__(self, z):
        return evaluate(self, z)


def _pair(c: complex):
    c = complex(c)
    return [c.real, c.imag]


def _pairs(cs):
    return [_pair(c) for c in cs]


class Const(Symbol):
    kind = "const"

    def __init__(self, value):
        self.value = complex(value)

    def _value(self, z):
        return np.full(np.shape(z), self.value, dtype=complex)

    def _deriv(self, z):
        return np.zeros(np.shape(z), dtype=complex)

    def to_json(self):
        return {"kind": "const", "value": _pair(self.value)}

    def __repr__(self):
        return f"Const({self.value})"


class Polynomial(Symbol):
    """Polynomial with coefficients in ascending degree."""

    kind = "polynomial"

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=complex).ravel()
        if coeffs.size == 0:
            raise ConfigError("polynomial needs at least one coefficient", "coeffs")
        self.coeffs = coeffs
        self._dcoeffs = P.polyder(coeffs) if coeffs.size > 1 else np.zeros(1, complex)

    def _value(self, z):
        return P.polyval(z, self.coeffs)

    def _deriv(self, z):
        return P.polyval(z, self._dcoeffs) + 0j * np.asarray(z)

    def to_json(self):
        return {"kind": "polynomial", "coeffs": _pairs(self.coeffs)}

    def __repr__(self):
        return f"Polynomial({self.coeffs.tolist()})"


class BlaschkeProduct(Symbol):
    """Finite product of the factors (a - z) / (1 - conj(a) z)."""

    kind = "blaschke"

    def __init__(self, zeros):
        self.zeros = tuple(as_disk_point(a, f"zeros[{k}]") for k, a in enumerate(zeros))

    def _factors(self, z):
        return [(a - z) / (1.0 - np.conj(a) * z) for a in self.zeros]

    def _value(self, z):
        out = np.ones(np.shape(z), dtype=complex)
        for f in self._factors(z):
            out = out * f
        return out

    def _deriv(self, z):
        factors = self._factors(z)
        out = np.zeros(np.shape(z), dtype=complex)
        for k, a in enumerate(self.zeros):
            term = -(1.0 - abs(a) ** 2) / (1.0 - np.conj(a) * z) ** 2
            for j, f in enumerate(factors):
                if j != k:
                    term = term * f
            out = out + term
        return out

    def to_json(self):
        return {"kind": "blaschke", "zeros": _pairs(self.zeros)}

    def __repr__(self):
        return f"BlaschkeProduct({list(self.zeros)})"


class Rational(Symbol):
    """Quotient of two polynomials; the denominator may not vanish on the closed disk."""

    kind = "rational"

    def __init__(self, num, den):
        self.num = Polynomial(num)
        self.den = Polynomial(den)
        _check_denominator(self.den.coeffs)

    def _value(self, z):
        return self.num._value(z) / self.den._value(z)

    def _deriv(self, z):
        n, d = self.num._value(z), self.den._value(z)
        return (self.num._deriv(z) * d - n * self.den._deriv(z)) / (d * d)

    def to_json(self):
        return {
            "kind": "rational",
            "num": _pairs(self.num.coeffs),
            "den": _pairs(self.den.coeffs),
        }

    def __repr__(self):
        return f"Rational({self.num.coeffs.tolist()}, {self.den.coeffs.tolist()})"


def _check_denominator(coeffs):
    n = _BOUNDARY_CHECK_POINTS
    theta = 2.0 * math.pi * np.arange(n) / n
    vals = P.polyval(np.exp(1j * theta), coeffs)
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0.0 or np.min(np.abs(vals)) <= 1e-12 * scale:
        raise ConfigError("denominator vanishes on the unit circle", "den")
    # argument principle; refine until no step turns by more than pi/4
    while True:
        steps = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(steps)) < math.pi / 4 or n >= 2 ** 24:
            break
        n *= 2
        vals = P.polyval(np.exp(2j * math.pi * np.arange(n) / n), coeffs)
    winding = int(round(float(np.sum(steps)) / (2.0 * math.pi)))
    if winding != 0:
        raise ConfigError(f"denominator has {winding} zero(s) inside the disk", "den")


class _Composite(Symbol):
    def __init__(self, children):
        children = tuple(children)
        if not children:
            raise ConfigError("needs at least one child", "children")
        for k, c in enumerate(children):
            if not isinstance(c, Symbol):
                raise ConfigError(f"child is not a symbol: {c!r}", f"children[{k}]")
        self.children = children
        if self.depth > MAX_DEPTH:
            raise ConfigError(f"tree depth exceeds {MAX_DEPTH}")

    @property
    def depth(self):
        return 1 + max(c.depth for c in self.children)

    def to_json(self):
        return {"kind": self.kind, "children": [c.to_json() for c in self.children]}

    def __repr__(self):
        return f"{type(self).__name__}({', '.join(map(repr, self.children))})"


class Sum(_Composite):
    kind = "sum"

    def _value(self, z):
        out = self.children[0]._value(z)
        for c in self.children[1:]:
            out = out + c._value(z)
        return out

    def _deriv(self, z):
        out = self.children[0]._deriv(z)
        for c in self.children[1:]:
            out = out + c._deriv(z)
        return out


class Product(_Composite):
    kind = "product"

    def _value(self, z):
        out = self.children[0]._value(z)
        for c in self.children[1:]:
            out = out * c._value(z)
        return out

    def _deriv(self, z):
        vals = [c._value(z) for c in self.children]
        out = np.zeros(np.shape(z), dtype=complex)
        for k, c in enumerate(self.children):
            term = c._deriv(z)
            for j, v in enumerate(vals):
                if j != k:
                    term = term * v
            out = out + term
        return out


class Scale(Symbol):
    kind = "scale"

    def __init__(self, factor, child):
        if not isinstance(child, Symbol):
            raise ConfigError(f"child is not a symbol: {child!r}", "child")
        self.factor = complex(factor)
        self.child = child
        if self.depth > MAX_DEPTH:
            raise ConfigError(f"tree depth exceeds {MAX_DEPTH}")

    @property
    def depth(self):
        return 1 + self.child.depth

    def _value(self, z):
        return self.factor * self.child._value(z)

    def _deriv(self, z):
        return self.factor * self.child._deriv(z)

    def to_json(self):
        return {"kind": "scale", "factor": _pair(self.factor), "child": self.child.to_json()}

    def __repr__(self):
        return f"Scale({self.factor}, {self.child!r})"


def _finite(out, what):
    if not np.all(np.isfinite(out)):
        raise NumericalFailure(f"non-finite {what}")
    return complex(out) if np.ndim(out) == 0 else out


def evaluate(expr: Symbol, z):
    """Value of ``expr`` at ``z`` (scalar or array)."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        out = expr._value(z)
    return _finite(out, "value")


def derivative(expr: Symbol, z):
    """Exact complex derivative of ``expr`` at ``z``."""
    z = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        out = expr._deriv(z)
    return _finite(out, "derivative")


@dataclass(frozen=True)
class LevelSetSpec:
    """The set G_c = {z : |g(z)| > c}."""

    symbol: Symbol
    threshold: float

    def __post_init__(self):
        if not self.threshold > 0:
            raise ConfigError(f"threshold must be positive, got {self.threshold}", "threshold")

    def contains(self, z):
        return level_set_member(self, z)


def level_set_member(spec: LevelSetSpec, z):
    out = np.abs(evaluate(spec.symbol, z)) > spec.threshold
    return bool(out) if np.ndim(out) == 0 else out


def sup_norm_estimate(expr: Symbol, samples: int = 4096, r_max: float = DEFAULT_R_MAX):
    """Max of |expr| on ``samples`` equispaced points of |z| = r_max.

    Returns ``(value, theta)``; by the maximum principle this is a lower bound
    for the supremum over the disk.
    """
    if samples < 1:
        raise ConfigError("samples must be positive", "samples")
    theta = 2.0 * math.pi * np.arange(samples) / samples
    vals = np.abs(evaluate(expr, r_max * np.exp(1j * theta)))
    k = int(np.argmax(vals))
    return float(vals[k]), float(theta[k])


# ---------------------------------------------------------------- JSON schema


def _parse_complex(node, path):
    if isinstance(node, (int, float)) and not isinstance(node, bool):
        return complex(node)
    if (
        isinstance(node, (list, tuple))
        and len(node) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in node)
    ):
        return complex(node[0], node[1])
    raise ConfigError("expected a number or a [re, im] pair", path)


def _parse_complex_list(node, path):
    if not isinstance(node, list) or not node:
        raise ConfigError("expected a non-empty list of [re, im] pairs", path)
    return [_parse_complex(x, f"{path}[{k}]") for k, x in enumerate(node)]


def symbol_from_json(node, path="$", _depth=1) -> Symbol:
    """Build a symbol from its JSON description; errors name the node path."""
    if _depth > MAX_DEPTH:
        raise ConfigError(f"tree depth exceeds {MAX_DEPTH}", path)
    if not isinstance(node, dict):
        raise ConfigError("expected an object", path)
    kind = node.get("kind")

    def need(key):
        if key not in node:
            raise ConfigError(f"missing field '{key}'", path)
        return node[key]

    try:
        if kind == "const":
            return Const(_parse_complex(need("value"), f"{path}.value"))
        if kind == "polynomial":
            return Polynomial(_parse_complex_list(need("coeffs"), f"{path}.coeffs"))
        if kind == "blaschke":
            zeros = _parse_complex_list(need("zeros"), f"{path}.zeros")
            for k, a in enumerate(zeros):
                if abs(a) >= 1.0:
                    raise ConfigError("zero is not inside the open disk", f"{path}.zeros[{k}]")
            return BlaschkeProduct(zeros)
        if kind == "rational":
            num = _parse_complex_list(need("num"), f"{path}.num")
            den = _parse_complex_list(need("den"), f"{path}.den")
            try:
                return Rational(num, den)
            except ConfigError as exc:
                raise ConfigError(str(exc).split(": ", 1)[-1], f"{path}.den") from None
        if kind in ("sum", "product"):
            kids = need("children")
            if not isinstance(kids, list) or not kids:
                raise ConfigError("expected a non-empty list", f"{path}.children")
            children = [
                symbol_from_json(c, f"{path}.children[{k}]", _depth + 1)
                for k, c in enumerate(kids)
            ]
            return Sum(children) if kind == "sum" else Product(children)
        if kind == "scale":
            factor = _parse_complex(need("factor"), f"{path}.factor")
            child = symbol_from_json(need("child"), f"{path}.child", _depth + 1)
            return Scale(factor, child)
    except ConfigError as exc:
        if exc.path is None or not str(exc.path).startswith("$"):
            raise ConfigError(str(exc), path) from None
        raise
    raise ConfigError(f"unknown kind {kind!r}", f"{path}.kind")


# ------------------------------------------------------------ constructors


def identity() -> Polynomial:
    return Polynomial([0, 1])


def linear(c0, c1) -> Polynomial:
    return Polynomial([c0, c1])
