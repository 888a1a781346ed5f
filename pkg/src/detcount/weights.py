"""Smooth dyadic window weight and the quadrature engines built around it.

The weight V is the canonical C-infinity bump amplitude * exp(-1/((x-1)(2-x)))
on (1, 2), identically zero outside.  All integrals in the package go through
the panelled Gauss-Legendre routines here: panels are split dyadically until
two successive refinements agree to the requested absolute tolerance.  For
oscillatory integrands the *initial* panel count already resolves the phase
(at least ten panels per period), so the refinement test is a safety net, not
the accuracy mechanism.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import QuadratureNotConverged, ValidationError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class WeightSpec:
    """Parameters of the window weight.

    kind: only "canonical-bump" is supported.
    amplitude: overall scale; zero is allowed (useful as a null weight in
    tests), negative is not.
    """

    kind: str = "canonical-bump"
    amplitude: float = 1.0

    def __post_init__(self) -> None:
        if self.kind != "canonical-bump":
            raise ValidationError(f"unknown weight kind {self.kind!r}")
        if not (self.amplitude >= 0.0) or not math.isfinite(self.amplitude):
            raise ValidationError(f"amplitude must be finite and >= 0, got {self.amplitude}")


@dataclass(frozen=True)
class QuadratureSpec:
    """Panelled Gauss-Legendre parameters.

    panels_per_axis: initial dyadic panel count on each axis.
    nodes_per_panel: Gauss-Legendre order within a panel (>= 4).
    abs_tolerance: stop refining once successive values differ by less.
    max_depth: number of panel doublings allowed before giving up.
    """

    panels_per_axis: int = 4
    nodes_per_panel: int = 12
    abs_tolerance: float = 1e-10
    max_depth: int = 8

    def __post_init__(self) -> None:
        if self.panels_per_axis < 1:
            raise ValidationError("panels_per_axis must be >= 1")
        if self.nodes_per_panel < 4:
            raise ValidationError("nodes_per_panel must be >= 4")
        if not (self.abs_tolerance > 0.0):
            raise ValidationError("abs_tolerance must be > 0")
        if self.max_depth < 1:
            raise ValidationError("max_depth must be >= 1")


def eval_weight(spec: WeightSpec, x: float) -> float:
    """V(x): exactly 0 outside (1, 2), amplitude * exp(-1/((x-1)(2-x))) inside."""
    if x <= 1.0 or x >= 2.0:
        return 0.0
    p = (x - 1.0) * (2.0 - x)
    if p <= 0.0:
        return 0.0
    try:
        return spec.amplitude * math.exp(-1.0 / p)
    except OverflowError:
        # -1/p overflowed to -inf for subnormal p; the limit is 0
        return 0.0


def eval_weight_array(spec: WeightSpec, x: np.ndarray) -> np.ndarray:
    """Vectorized eval_weight."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = (x > 1.0) & (x < 2.0)
    if np.any(inside):
        p = (x[inside] - 1.0) * (2.0 - x[inside])
        with np.errstate(divide="ignore", over="ignore", under="ignore"):
            vals = np.exp(-1.0 / p)
        vals[~np.isfinite(vals)] = 0.0
        out[inside] = spec.amplitude * vals
    return out


def eval_weight_prime(spec: WeightSpec, x: float) -> float:
    """Analytic V'(x); V' = V * (3-2x)/((x-1)(2-x))^2 inside the support."""
    if x <= 1.0 or x >= 2.0:
        return 0.0
    p = (x - 1.0) * (2.0 - x)
    v = eval_weight(spec, x)
    if v == 0.0:
        return 0.0
    return v * (3.0 - 2.0 * x) / (p * p)


@lru_cache(maxsize=64)
def _gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, wts = np.polynomial.legendre.leggauss(order)
    return nodes, wts


def panel_grid(a: float, b: float, panels: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Flat node/weight arrays for `panels` equal panels on [a, b]."""
    nodes, wts = _gauss_legendre(order)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * wts[None, :]).ravel()
    return x, w


def integrate_1d(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    quad: QuadratureSpec,
    min_panels: int = 1,
) -> complex | float:
    """Adaptive panelled Gauss-Legendre on [a, b].

    f must accept a float ndarray and return an ndarray (real or complex).
    Panels double until two successive estimates differ by < abs_tolerance.
    """
    if not b > a:
        return 0.0
    panels = max(quad.panels_per_axis, min_panels)
    x, w = panel_grid(a, b, panels, quad.nodes_per_panel)
    prev = np.sum(w * np.asarray(f(x)))
    for _ in range(quad.max_depth):
        panels *= 2
        x, w = panel_grid(a, b, panels, quad.nodes_per_panel)
        cur = np.sum(w * np.asarray(f(x)))
        if abs(cur - prev) < quad.abs_tolerance:
            return complex(cur) if np.iscomplexobj(cur) else float(cur)
        prev = cur
    raise QuadratureNotConverged(
        f"1d quadrature on [{a}, {b}] did not reach {quad.abs_tolerance} "
        f"within {quad.max_depth} refinements"
    )


def integral(spec: WeightSpec, quad: QuadratureSpec) -> float:
    """Integral of V over its support [1, 2]."""
    if spec.amplitude == 0.0:
        return 0.0
    val = integrate_1d(lambda x: eval_weight_array(spec, x), 1.0, 2.0, quad)
    return float(val.real if isinstance(val, complex) else val)


def fourier(spec: WeightSpec, xi: float, quad: QuadratureSpec) -> complex:
    """Fourier transform integral of V(x) * exp(-2*pi*i*xi*x) over [1, 2].

    Initial panel width is at most 1/(10|xi|) so every oscillation period is
    covered by at least ten panels.
    """
    if spec.amplitude == 0.0:
        return 0.0 + 0.0j
    min_panels = max(1, math.ceil(10.0 * abs(xi)))

    def f(x: np.ndarray) -> np.ndarray:
        return eval_weight_array(spec, x) * np.exp(-1j * TWO_PI * xi * x)

    val = integrate_1d(f, 1.0, 2.0, quad, min_panels=min_panels)
    return complex(val)


TRUNCATION_FLOOR = 1e-14
_TRUNCATION_RUN = 3


def poisson_check(spec: WeightSpec, scale: float, quad: QuadratureSpec) -> float:
    """Residual of the summation identity for f(x) = V(x/scale).

    Left side: sum of f over the integers (finite, support (scale, 2*scale)).
    Right side: scale times the sum of the Fourier transform of V sampled at
    scale*n, truncated once terms stay below 1e-14.  Returns |LHS - RHS|.
    """
    if not (scale > 0.0):
        raise ValidationError(f"scale must be positive, got {scale}")
    if spec.amplitude == 0.0:
        return 0.0
    lo = math.floor(scale) + 1
    hi = math.ceil(2.0 * scale) - 1
    lhs = 0.0
    c = 0.0
    for n in range(lo, hi + 1):
        y = eval_weight(spec, n / scale) - c
        t = lhs + y
        c = (t - lhs) - y
        lhs = t

    rhs = complex(scale * fourier(spec, 0.0, quad))
    small_run = 0
    n = 1
    while small_run < _TRUNCATION_RUN:
        term = scale * (fourier(spec, scale * n, quad) + fourier(spec, -scale * n, quad))
        rhs += term
        if abs(term) < TRUNCATION_FLOOR:
            small_run += 1
        else:
            small_run = 0
        n += 1
    return abs(lhs - rhs)


def integrate_3d(
    f: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray],
    quad: QuadratureSpec,
) -> float:
    """Tensor Gauss-Legendre over the cube [1, 2]^3 with dyadic refinement.

    f(u, v, t) must broadcast over numpy arrays; it is called one t-slice at a
    time with u of shape (nu, 1), v of shape (1, nv) and scalar t, which keeps
    peak memory at one 2-d grid.
    """

    def tensor_value(panels: int) -> float:
        x, w = panel_grid(1.0, 2.0, panels, quad.nodes_per_panel)
        u = x[:, None]
        v = x[None, :]
        w2 = w[:, None] * w[None, :]
        total = 0.0
        for t, wt in zip(x, w):
            vals = np.asarray(f(u, v, t))
            if vals.shape != w2.shape:
                vals = np.broadcast_to(vals, w2.shape)
            total += wt * float(np.sum(w2 * vals))
        return total

    panels = quad.panels_per_axis
    prev = tensor_value(panels)
    for _ in range(quad.max_depth):
        panels *= 2
        cur = tensor_value(panels)
        if abs(cur - prev) < quad.abs_tolerance:
            return cur
        prev = cur
    raise QuadratureNotConverged(
        f"3d quadrature did not reach {quad.abs_tolerance} within {quad.max_depth} refinements"
    )
