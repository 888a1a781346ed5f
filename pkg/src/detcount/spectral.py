"""Oscillatory window weights and the Bessel-kernel transforms they feed.

The weight v(u) pairs the dyadic window with two unit-modulus phases; f is v
precomposed with t -> 4*pi*sqrt(|m n r1|)/t, compactly supported on an
interval t ~ T = l*sqrt(|m n r1|)/X.  The three transforms pair f against
K_{2i eta}, the imaginary-order J difference, and integer-order J kernels.

Numerical routes:
  * K of imaginary order: exp(-t cosh u) cos(2 eta u) quadrature while the
    target is above the double-precision cancellation floor (|eta| <= 8),
    an ascending-series route beyond; a Mellin contour evaluator is kept as
    an independent cross-check.
  * J of integer order: ascending series where it is cancellation-free
    (|x| <= 12 or k >= |x|), otherwise downward recurrence normalized by the
    even-order sum rule.
  * J of imaginary order: ascending series with the complex Gamma below.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .counting import KahanSum
from .errors import (
    OutOfValidatedRange,
    PoleAtNonpositiveInteger,
    QuadratureNotConverged,
    ValidationError,
)
from .expsums import KloostermanQuery, kloosterman
from .mainterm import RAMANUJAN_EXPONENT_THETA  # noqa: F401  (re-exported constant)
from .weights import QuadratureSpec, WeightSpec, eval_weight, panel_grid

TWO_PI = 2.0 * math.pi
_COSH_ROUTE_ETA_MAX = 8.0


@dataclass(frozen=True)
class OscWeightParams:
    """Frequencies (m, n), reduced shift r1 = r/l, divisor l, window X, and the
    representative points x in (X, 2X), y with l*y in (X, 2X).

    x and y default to the window midpoints 1.5*X and 1.5*X/l.
    """

    m: int
    n: int
    r1: int
    l: int
    X: float
    weight: WeightSpec = WeightSpec()
    x: float | None = None
    y: float | None = None

    def __post_init__(self) -> None:
        if self.m == 0 or self.n == 0 or self.r1 == 0:
            raise ValidationError("m, n and r1 must be nonzero")
        if self.l < 1:
            raise ValidationError(f"l must be >= 1, got {self.l}")
        if not (self.X > 0.0):
            raise ValidationError(f"X must be positive, got {self.X}")
        if self.x is None:
            object.__setattr__(self, "x", 1.5 * self.X)
        if self.y is None:
            object.__setattr__(self, "y", 1.5 * self.X / self.l)
        if not (self.X < self.x < 2.0 * self.X):
            raise ValidationError(f"x must lie in (X, 2X), got {self.x}")
        if not (self.X < self.l * self.y < 2.0 * self.X):
            raise ValidationError(f"l*y must lie in (X, 2X), got {self.l * self.y}")

    @property
    def scale_T(self) -> float:
        """l * sqrt(|m n r1|) / X, the natural support scale of f."""
        return self.l * math.sqrt(abs(self.m * self.n * self.r1)) / self.X


def v_weight(p: OscWeightParams, u: float) -> complex:
    """(X/(l u)) V(l u/X) V((r1 + y x)/(u X)) e(-n x/u) e(-m y/u)."""
    if u <= 0.0:
        return 0.0 + 0.0j
    w1 = eval_weight(p.weight, p.l * u / p.X)
    if w1 == 0.0:
        return 0.0 + 0.0j
    w2 = eval_weight(p.weight, (p.r1 + p.y * p.x) / (u * p.X))
    if w2 == 0.0:
        return 0.0 + 0.0j
    phase = -TWO_PI * (p.n * p.x + p.m * p.y) / u
    return (p.X / (p.l * u)) * w1 * w2 * cmath.exp(1j * phase)


def f_weight(p: OscWeightParams, t: float) -> complex:
    """f(t) = v(4 pi sqrt(|m n r1|)/t)."""
    if not (t > 0.0):
        raise ValidationError(f"t must be positive, got {t}")
    return v_weight(p, 4.0 * math.pi * math.sqrt(abs(p.m * p.n * p.r1)) / t)


def f_support(p: OscWeightParams) -> tuple[float, float] | None:
    """Closure of {t : f(t) != 0}, or None when the two windows miss."""
    s = p.r1 + p.y * p.x
    if s <= 0.0:
        return None
    u_lo = max(p.X / p.l, s / (2.0 * p.X))
    u_hi = min(2.0 * p.X / p.l, s / p.X)
    if u_lo >= u_hi:
        return None
    root = 4.0 * math.pi * math.sqrt(abs(p.m * p.n * p.r1))
    return root / u_hi, root / u_lo


# ---------------------------------------------------------------------------
# Gamma

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def complex_gamma(z: complex) -> complex:
    """Gamma via a 9-term Lanczos sum, reflected for Re z < 1/2."""
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == int(z.real):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {z}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * complex_gamma(1.0 - z))
    z -= 1.0
    a = _LANCZOS[0]
    for i in range(1, 9):
        a += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * a


# ---------------------------------------------------------------------------
# J of integer order

_J_MAX_ORDER = 200
_J_MAX_ARG = 100.0


def _j_series(k: int, x: float) -> float:
    half = 0.5 * x
    lead = k * math.log(half) - math.lgamma(k + 1)
    if lead < -745.0:
        return 0.0
    term = math.exp(lead)
    total = term
    m = 0
    while True:
        m += 1
        term *= -(half * half) / (m * (k + m))
        total += term
        if abs(term) < 1e-18 * max(1.0, abs(total)) or m > 500:
            return total


def _j_miller(k: int, x: float) -> float:
    start = int(max(k, x) + 20 + 10 * math.sqrt(max(k, x)))
    if start % 2:
        start += 1
    jp = 0.0
    j = 1e-30
    total = 0.0
    out = 0.0
    for n in range(start, 0, -1):
        jm = (2.0 * n / x) * j - jp
        jp, j = j, jm
        if abs(j) > 1e250:
            j *= 1e-250
            jp *= 1e-250
            out *= 1e-250
            total *= 1e-250
        if n - 1 == k:
            out = j
        if (n - 1) % 2 == 0:
            total += 2.0 * j if n - 1 > 0 else j
    return out / total


def j_bessel(k: int, x: float) -> float:
    """J_k(x) for 0 <= k <= 200, |x| <= 100, to ~1e-10 absolute."""
    if k < 0 or k > _J_MAX_ORDER or abs(x) > _J_MAX_ARG:
        raise OutOfValidatedRange(f"j_bessel validated for 0 <= k <= 200, |x| <= 100; got k={k}, x={x}")
    if x < 0.0:
        val = j_bessel(k, -x)
        return val if k % 2 == 0 else -val
    if x == 0.0:
        return 1.0 if k == 0 else 0.0
    if x <= 12.0 or k >= x:
        return _j_series(k, x)
    return _j_miller(k, x)


# ---------------------------------------------------------------------------
# Imaginary order

_IMAG_ETA_MAX = 30.0
_IMAG_ARG_MAX = 30.0


def j_bessel_imag_order(eta: float, x: float) -> complex:
    """J_{2i eta}(x) by the ascending series, for 0 < x <= 30, |eta| <= 30."""
    if not (0.0 < x <= _IMAG_ARG_MAX) or abs(eta) > _IMAG_ETA_MAX:
        raise OutOfValidatedRange(
            f"j_bessel_imag_order validated for 0 < x <= 30, |eta| <= 30; got eta={eta}, x={x}"
        )
    nu = 2j * eta
    half = 0.5 * x
    if eta == 0.0:
        return complex(_j_series(0, x))
    cur = cmath.exp(nu * math.log(half)) / complex_gamma(nu + 1.0)
    total = cur
    m = 0
    while True:
        m += 1
        cur *= -(half * half) / (m * (nu + m))
        total += cur
        if abs(cur) < 1e-16 * max(abs(total), 1e-300) or m > 500:
            return total


def _k_imag_series(eta: float, t: float) -> float:
    """K_{2i eta}(t) = -pi Im I_{2i|eta|}(t) / sinh(2 pi |eta|); stable products
    of e^{+pi eta}- and e^{-2 pi eta}-sized factors, no cancellation for t <= 2."""
    mu = 2.0 * abs(eta)
    nu = 1j * mu
    half = 0.5 * t
    cur = cmath.exp(nu * math.log(half)) / complex_gamma(nu + 1.0)
    total = cur
    m = 0
    while True:
        m += 1
        cur *= (half * half) / (m * (nu + m))
        total += cur
        if abs(cur) < 1e-17 * abs(total) or m > 500:
            break
    return -math.pi * total.imag / math.sinh(math.pi * mu)


def _k_cosh_grid(eta: float, ts: np.ndarray) -> np.ndarray:
    """Batch K_{2i eta} over a t-grid via the cosh-integral on a shared u-grid."""
    nu = 2.0 * abs(eta)
    t_min = float(np.min(ts))
    u_max = math.acosh(41.5 / t_min) if t_min < 41.5 else 1.0
    panels = max(64, math.ceil(10.0 * nu * u_max / TWO_PI))
    prev = None
    for _ in range(7):
        u, w = panel_grid(0.0, u_max, panels, 10)
        kernel = np.exp(-np.outer(ts, np.cosh(u)))
        vals = kernel @ (w * np.cos(nu * u))
        # 1e-14 floor: summation roundoff of the O(1)-mass integrand (~4e-16)
        # must stay below the convergence target
        if prev is not None and float(np.max(np.abs(vals - prev))) < max(
            1e-14, 1e-11 * float(np.max(np.abs(vals)))
        ):
            return vals
        prev = vals
        panels *= 2
    raise QuadratureNotConverged("cosh-integral K did not stabilize")


def k_bessel_imag(eta: float, t: float) -> float:
    """K of purely imaginary order 2i*eta at t > 0; real and even in eta.

    The cosh-integral route carries an absolute roundoff floor of ~1e-16, so
    beyond |eta| = 8 (values below ~5e-12) the series route takes over.
    """
    if not (t > 0.0):
        raise ValidationError(f"t must be positive, got {t}")
    if t < 1e-3:
        raise QuadratureNotConverged(
            "t < 1e-3 needs finer panels than the validated grid; not supported"
        )
    if abs(eta) > _COSH_ROUTE_ETA_MAX:
        return _k_imag_series(eta, t)
    return float(_k_cosh_grid(eta, np.array([t]))[0])


def k_bessel_imag_mellin(eta: float, t: float, sigma: float = 1.0) -> float:
    """Independent evaluation of K_{2i eta}(t) by quadrature of the inverse
    Mellin integral of 2^{s-2} t^{-s} Gamma(s/2 + i eta) Gamma(s/2 - i eta)
    along Re s = sigma.  Cross-check oracle; ~1e-8 accuracy.

    2^{s-2} is forced by the Mellin pair
    integral_0^inf K_nu(t) t^{s-1} dt = 2^{s-2} Gamma((s+nu)/2) Gamma((s-nu)/2);
    it is confirmed here against both the cosh-integral and series routes.
    """
    if not (t > 0.0) or not (sigma > 0.0):
        raise ValidationError("t and sigma must be positive")
    width = 2.0 * abs(eta) + 80.0
    panels = max(200, math.ceil(10.0 * width * (abs(math.log(t)) + 2.0) / TWO_PI))
    w, wts = panel_grid(-width, width, panels, 10)
    total = 0.0 + 0.0j
    for wi, wt in zip(w, wts):
        s = complex(sigma, wi)
        val = (
            2.0 ** (s - 2.0)
            * t ** (-s)
            * complex_gamma(0.5 * s + 1j * eta)
            * complex_gamma(0.5 * s - 1j * eta)
        )
        total += wt * val
    return (total / (2.0 * math.pi)).real


# ---------------------------------------------------------------------------
# Transforms

def _support_or_zero(p: OscWeightParams) -> tuple[float, float] | None:
    sup = f_support(p)
    if sup is None or p.weight.amplitude == 0.0:
        return None
    return sup


def _phase_cycles(p: OscWeightParams, t_lo: float, t_hi: float, eta: float) -> float:
    # f carries the linear phase -2 pi (n x + m y) t / root; the kernels
    # oscillate like cos(2 eta ln t)
    root = 4.0 * math.pi * math.sqrt(abs(p.m * p.n * p.r1))
    linear = abs(p.n * p.x + p.m * p.y) * (t_hi - t_lo) / root
    logphase = 2.0 * abs(eta) * math.log(t_hi / t_lo) / TWO_PI
    return linear + logphase


def _transform_quadrature(
    p: OscWeightParams,
    eta: float,
    quad: QuadratureSpec,
    kernel_on_grid,
) -> complex:
    """Common adaptive loop: integrate kernel(t) * f(t)/t over the support."""
    sup = _support_or_zero(p)
    if sup is None:
        return 0.0 + 0.0j
    t_lo, t_hi = sup
    panels = max(quad.panels_per_axis, 32, math.ceil(10.0 * _phase_cycles(p, t_lo, t_hi, eta)))
    prev: complex | None = None
    for _ in range(quad.max_depth + 1):
        ts, ws = panel_grid(t_lo, t_hi, panels, quad.nodes_per_panel)
        kern = kernel_on_grid(ts)
        fv = np.array([f_weight(p, float(t)) for t in ts])
        cur = complex(np.sum(ws * kern * fv / ts))
        if prev is not None and abs(cur - prev) < max(quad.abs_tolerance, 1e-8 * abs(cur)):
            return cur
        prev = cur
        panels *= 2
    raise QuadratureNotConverged("transform quadrature did not stabilize")


def f_check(p: OscWeightParams, eta: float, quad: QuadratureSpec) -> complex:
    """(4/pi) * integral of K_{2i eta}(t) f(t) dt/t."""
    if eta == 0.0:
        raise ValidationError("eta must be nonzero")

    def kernel(ts: np.ndarray) -> np.ndarray:
        if abs(eta) > _COSH_ROUTE_ETA_MAX:
            return np.array([_k_imag_series(eta, float(t)) for t in ts])
        return _k_cosh_grid(eta, ts)

    return (4.0 / math.pi) * _transform_quadrature(p, eta, quad, kernel)


def f_ddot(p: OscWeightParams, eta: float, quad: QuadratureSpec) -> complex:
    """(pi i / sinh(2 pi eta)) * integral of (J_{2i eta} - J_{-2i eta})(x) f(x) dx/x.

    J_{-2i eta} is the conjugate of J_{2i eta} on the real axis, so the kernel
    is 2i Im J_{2i eta} and the prefactor collapses to -2 pi / sinh(2 pi eta);
    the result is even in eta.
    """
    if eta == 0.0:
        raise ValidationError("eta must be nonzero")
    sup = _support_or_zero(p)
    if sup is not None and sup[1] > _IMAG_ARG_MAX:
        raise OutOfValidatedRange(
            f"support reaches {sup[1]:.3g} > 30, beyond the validated series range"
        )

    def kernel(ts: np.ndarray) -> np.ndarray:
        return np.array([j_bessel_imag_order(eta, float(t)).imag for t in ts])

    pref = -2.0 * math.pi / math.sinh(2.0 * math.pi * eta)
    return pref * _transform_quadrature(p, eta, quad, kernel)


def f_tilde(p: OscWeightParams, k: int, quad: QuadratureSpec) -> complex:
    """(4 (k-1)! / (4 pi i)^k) * integral of J_{k-1}(x) f(x) dx/x, k even.

    The factorial prefactor is assembled in log space; for even k the phase
    (1/i)^k is the real sign (-1)^{k/2}.
    """
    if k < 2 or k > 100 or k % 2:
        raise ValidationError(f"k must be even with 2 <= k <= 100, got {k}")

    def kernel(ts: np.ndarray) -> np.ndarray:
        return np.array([j_bessel(k - 1, float(t)) for t in ts])

    sign = -1.0 if (k // 2) % 2 else 1.0
    pref = sign * math.exp(math.log(4.0) + math.lgamma(k) - k * math.log(4.0 * math.pi))
    return pref * _transform_quadrature(p, 0.0, quad, kernel)


def weighted_kloosterman_sum(p: OscWeightParams, C_max: int) -> tuple[complex, float]:
    """Signed sum over c <= C_max of S(n r1, -m; c) v(c) / c, plus the
    absolute-value companion sum(|S| |v|/c).

    Only moduli inside the support window of v contribute, so the sum
    truncates itself once C_max covers the window.
    """
    if C_max < 1:
        raise ValidationError(f"C_max must be >= 1, got {C_max}")
    signed = 0.0 + 0.0j
    absolute = KahanSum()
    for c in range(1, C_max + 1):
        vc = v_weight(p, float(c))
        if vc == 0.0:
            continue
        s = kloosterman(KloostermanQuery(p.n * p.r1, -p.m, c))
        signed += s * vc / c
        absolute.add(abs(s) * abs(vc) / c)
    return signed, absolute.value


def bessel_identity_residuals(
    x: float, y: float, k_max: int, quad: QuadratureSpec
) -> tuple[float, float]:
    """Residuals of two even-order J-sum identities, truncated at k_max.

    (a) sum 2(k-1) J_{k-1}(x) J_{k-1}(y)  vs  x y * integral_0^1 u J_0(ux) J_0(uy) du
    (b) sum (k-1) (1/i)^k J_{k-1}(x)      vs  -(x/2) J_0(x)
    both sums over even k >= 2.
    """
    if not (0.0 < x <= 20.0) or not (0.0 < y <= 20.0):
        raise OutOfValidatedRange(f"x, y must lie in (0, 20]; got {x}, {y}")
    if k_max < 40:
        raise ValidationError(f"k_max must be >= 40, got {k_max}")
    lhs_a = 0.0
    lhs_b = 0.0
    for k in range(2, k_max + 1, 2):
        jx = j_bessel(k - 1, x)
        sign = -1.0 if (k // 2) % 2 else 1.0
        lhs_a += 2.0 * (k - 1) * jx * j_bessel(k - 1, y)
        lhs_b += (k - 1) * sign * jx

    us, ws = panel_grid(0.0, 1.0, max(quad.panels_per_axis, 16), quad.nodes_per_panel)
    j0x = np.array([j_bessel(0, float(u * x)) for u in us])
    j0y = np.array([j_bessel(0, float(u * y)) for u in us])
    rhs_a = x * y * float(np.sum(ws * us * j0x * j0y))
    rhs_b = -0.5 * x * j_bessel(0, x)
    return abs(lhs_a - rhs_a), abs(lhs_b - rhs_b)
