"""Smooth scalar functions, uniform grids, and Simpson quadrature.

Two function carriers are used throughout the package:

* :class:`SmoothFunction`: an analytic description (value and first two
  derivatives as vectorized callables) used for problem data, where exact
  derivatives matter.
* :class:`GridFunction`: samples on a uniform grid with an odd number of
  nodes, so that composite Simpson weights always apply.  All integral
  quantities in the package reduce to :func:`integrate` on such grids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.interpolate import CubicSpline

from .errors import (
    BadParams,
    DomainError,
    GridError,
    UnknownCatalogEntry,
    UnsupportedNorm,
)

Evaluator = Callable[[np.ndarray], np.ndarray]

_NEG_INF = float("-inf")
_POS_INF = float("inf")


@dataclass(frozen=True)
class SmoothFunction:
    """A scalar function with analytically consistent first and second derivatives.

    ``value``, ``d1`` and ``d2`` accept floats or numpy arrays and broadcast.
    ``domain`` is the closed interval on which evaluation is trusted; catalog
    entries default to the whole line, spline sources to their sample range.
    """

    value: Evaluator
    d1: Evaluator
    d2: Evaluator
    domain: tuple[float, float] = (_NEG_INF, _POS_INF)
    source: str = "catalog-analytic"

    def __call__(self, x):
        return self.value(x)

    def covers(self, a: float, b: float, slack: float = 1e-12) -> bool:
        lo, hi = self.domain
        return lo - slack <= a and b <= hi + slack


def _require_arity(name: str, params, arity: int) -> None:
    if len(params) != arity:
        raise BadParams(f"catalog entry '{name}' takes {arity} parameter(s), got {len(params)}")


def catalog(name: str, params, domain: tuple[float, float] = (_NEG_INF, _POS_INF)) -> SmoothFunction:
    """Build a SmoothFunction from a named analytic family.

    Families and their parameters:

    ==========  =======================  ==========================================
    name        params                   f(x)
    ==========  =======================  ==========================================
    zero        []                       0
    const       [c]                      c
    poly        [c0, c1, ...]            sum c_k x^k  (ascending powers)
    sin         [w, phi]                 sin(w x + phi)
    cos         [w, phi]                 cos(w x + phi)
    gaussian    [amp, mu, sigma]         amp exp(-(x-mu)^2 / (2 sigma^2))
    tanh-bump   [amp, c, w]              amp sech^2((x - c) / w)
    ==========  =======================  ==========================================
    """
    params = [float(p) for p in params]

    if name == "zero":
        _require_arity(name, params, 0)

        def mk(c):
            return lambda x: np.zeros_like(np.asarray(x, dtype=float))

        return SmoothFunction(mk(0), mk(0), mk(0), domain, "catalog-analytic")

    if name == "const":
        _require_arity(name, params, 1)
        c = params[0]
        zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
        return SmoothFunction(
            lambda x: np.full_like(np.asarray(x, dtype=float), c), zero, zero, domain, "catalog-analytic"
        )

    if name == "poly":
        if len(params) < 1:
            raise BadParams("catalog entry 'poly' needs at least one coefficient")
        c0 = np.asarray(params, dtype=float)
        c1 = npoly.polyder(c0) if len(c0) > 1 else np.zeros(1)
        c2 = npoly.polyder(c1) if len(c1) > 1 else np.zeros(1)
        return SmoothFunction(
            lambda x: npoly.polyval(np.asarray(x, dtype=float), c0),
            lambda x: npoly.polyval(np.asarray(x, dtype=float), c1),
            lambda x: npoly.polyval(np.asarray(x, dtype=float), c2),
            domain,
            "catalog-analytic",
        )

    if name in ("sin", "cos"):
        _require_arity(name, params, 2)
        w, phi = params
        if name == "sin":
            val = lambda x: np.sin(w * np.asarray(x, dtype=float) + phi)
            der = lambda x: w * np.cos(w * np.asarray(x, dtype=float) + phi)
            dd = lambda x: -w * w * np.sin(w * np.asarray(x, dtype=float) + phi)
        else:
            val = lambda x: np.cos(w * np.asarray(x, dtype=float) + phi)
            der = lambda x: -w * np.sin(w * np.asarray(x, dtype=float) + phi)
            dd = lambda x: -w * w * np.cos(w * np.asarray(x, dtype=float) + phi)
        return SmoothFunction(val, der, dd, domain, "catalog-analytic")

    if name == "gaussian":
        _require_arity(name, params, 3)
        amp, mu, sigma = params
        if sigma <= 0:
            raise BadParams("catalog entry 'gaussian' needs sigma > 0")
        s2 = sigma * sigma

        def val(x):
            z = np.asarray(x, dtype=float) - mu
            return amp * np.exp(-z * z / (2 * s2))

        def der(x):
            z = np.asarray(x, dtype=float) - mu
            return -amp * z / s2 * np.exp(-z * z / (2 * s2))

        def dd(x):
            z = np.asarray(x, dtype=float) - mu
            return amp * (z * z / (s2 * s2) - 1.0 / s2) * np.exp(-z * z / (2 * s2))

        return SmoothFunction(val, der, dd, domain, "catalog-analytic")

    if name == "tanh-bump":
        _require_arity(name, params, 3)
        amp, c, w = params
        if w == 0:
            raise BadParams("catalog entry 'tanh-bump' needs w != 0")

        # f = amp * sech^2(z), z = (x - c)/w
        def val(x):
            z = (np.asarray(x, dtype=float) - c) / w
            sech = 1.0 / np.cosh(z)
            return amp * sech * sech

        def der(x):
            z = (np.asarray(x, dtype=float) - c) / w
            sech2 = 1.0 / np.cosh(z) ** 2
            return -2.0 * amp / w * sech2 * np.tanh(z)

        def dd(x):
            z = (np.asarray(x, dtype=float) - c) / w
            sech2 = 1.0 / np.cosh(z) ** 2
            th = np.tanh(z)
            return 2.0 * amp / (w * w) * sech2 * (2.0 * th * th - sech2)

        return SmoothFunction(val, der, dd, domain, "catalog-analytic")

    raise UnknownCatalogEntry(f"no catalog entry named '{name}'")


def from_samples(xs, ys) -> SmoothFunction:
    """Natural cubic spline through ``(xs, ys)``.

    d2 at the boundary nodes is the one-sided polynomial value (zero for the
    natural end conditions, up to rounding).  The domain is the sample range.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.size < 4:
        raise BadParams("spline source needs at least 4 sample points")
    if np.any(np.diff(xs) <= 0):
        raise BadParams("spline sample abscissae must be strictly increasing")
    sp = CubicSpline(xs, ys, bc_type="natural")
    d1 = sp.derivative(1)
    d2 = sp.derivative(2)
    return SmoothFunction(
        lambda x: sp(np.asarray(x, dtype=float)),
        lambda x: d1(np.asarray(x, dtype=float)),
        lambda x: d2(np.asarray(x, dtype=float)),
        (float(xs[0]), float(xs[-1])),
        "spline-from-samples",
    )


@dataclass
class GridFunction:
    """Samples of a function on the uniform grid of ``n`` nodes over [a, b].

    ``n`` must be odd and at least 3 so composite Simpson weights exist.
    """

    a: float
    b: float
    n: int
    values: np.ndarray

    def __post_init__(self):
        self.a = float(self.a)
        self.b = float(self.b)
        self.n = int(self.n)
        if not self.b > self.a:
            raise GridError("grid needs b > a")
        if self.n < 3 or self.n % 2 == 0:
            raise GridError(f"grid size must be odd and >= 3, got n={self.n}")
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.n,):
            raise GridError(f"values shape {self.values.shape} does not match n={self.n}")
        if not np.all(np.isfinite(self.values)):
            raise GridError("grid values must be finite")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.a, self.b, self.n)

    @property
    def h(self) -> float:
        return (self.b - self.a) / (self.n - 1)

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.a, self.b, self.n, values)


@dataclass
class C1GridFunction(GridFunction):
    """Grid samples augmented with first-derivative samples at the nodes."""

    d1: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        super().__post_init__()
        self.d1 = np.asarray(self.d1, dtype=float)
        if self.d1.shape != (self.n,):
            raise GridError(f"d1 shape {self.d1.shape} does not match n={self.n}")


def sample(f: SmoothFunction, a: float, b: float, n: int) -> GridFunction:
    """Sample a SmoothFunction onto a uniform grid (DomainError if not covered)."""
    if not f.covers(a, b):
        raise DomainError(f"[{a}, {b}] lies outside the function domain {f.domain}")
    g = GridFunction(a, b, n, np.zeros(n))
    g.values = np.asarray(f.value(g.xs), dtype=float)
    return g


def simpson_weights(n: int, h: float) -> np.ndarray:
    """Composite Simpson weights h/3 * (1, 4, 2, 4, ..., 2, 4, 1) for odd n."""
    if n < 3 or n % 2 == 0:
        raise GridError(f"Simpson weights need odd n >= 3, got {n}")
    w = np.full(n, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    return w * (h / 3.0)


def integrate(g: GridFunction) -> float:
    """Composite Simpson integral of the grid samples over [a, b]."""
    return float(np.dot(simpson_weights(g.n, g.h), g.values))


def lp_norm(g: GridFunction, p: int) -> float:
    """L^p norm (p = 1 or 2) of the grid samples, by Simpson on |g|^p."""
    if p == 1:
        return float(np.dot(simpson_weights(g.n, g.h), np.abs(g.values)))
    if p == 2:
        val = float(np.dot(simpson_weights(g.n, g.h), g.values * g.values))
        # Simpson of a square can round to a tiny negative number for ~zero data.
        return math.sqrt(max(val, 0.0))
    raise UnsupportedNorm(f"only p in {{1, 2}} is supported, got p={p}")


# 4th-order finite differences; one-sided stencils at the four edge nodes.
_FD_FORWARD = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
_FD_OFFSET1 = np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0


def fd_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """First derivative of uniformly spaced samples, 4th order everywhere."""
    v = np.asarray(values, dtype=float)
    n = v.size
    if n < 5:
        raise GridError("4th-order differences need at least 5 nodes")
    d = np.empty(n)
    d[2:-2] = (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:]) / (12.0 * h)
    d[0] = np.dot(_FD_FORWARD, v[:5]) / h
    d[1] = np.dot(_FD_OFFSET1, v[:5]) / h
    d[-1] = -np.dot(_FD_FORWARD, v[-5:][::-1]) / h
    d[-2] = -np.dot(_FD_OFFSET1, v[-5:][::-1]) / h
    return d
