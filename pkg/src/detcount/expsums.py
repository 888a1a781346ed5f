"""Exact exponential sums over units: Kloosterman, Ramanujan and Jacobi-twisted
variants, the Weil-normalized gap, and a twisted summation-formula residual.

All sums are direct O(c) enumerations with a cached inverse table; desk-scale
moduli (c up to ~10^5) need nothing fancier.  The Kloosterman sum is computed
on the real cosine path (beta and -beta pair up); the complex path is kept for
cross-checks.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .arith import gcd, jacobi, mobius, tau
from .counting import KahanSum
from .errors import EvenModulus, ValidationError
from .weights import (
    TRUNCATION_FLOOR,
    QuadratureSpec,
    WeightSpec,
    eval_weight,
    fourier,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class KloostermanQuery:
    m: int
    n: int
    c: int

    def __post_init__(self) -> None:
        if self.c < 1:
            raise ValidationError(f"modulus must be >= 1, got {self.c}")


@lru_cache(maxsize=256)
def inverse_table(c: int) -> tuple:
    """inv[b] for b in [0, c), with -1 marking non-units."""
    table = [-1] * c
    for b in range(1, c):
        if math.gcd(b, c) == 1:
            table[b] = pow(b, -1, c)
    return tuple(table)


def kloosterman(q: KloostermanQuery) -> float:
    """S(m, n; c) = sum over units beta mod c of e((m beta + n beta^{-1})/c).

    Real by the beta <-> -beta pairing; computed directly on cosines.
    S(m, n; 1) = 1 by the empty-modulus convention.
    """
    c = q.c
    if c == 1:
        return 1.0
    inv = inverse_table(c)
    acc = KahanSum()
    for b in range(1, c):
        bi = inv[b]
        if bi < 0:
            continue
        acc.add(math.cos(TWO_PI * ((q.m * b + q.n * bi) % c) / c))
    return acc.value


def kloosterman_complex(q: KloostermanQuery) -> complex:
    """Complex-exponential path; imaginary part is a cancellation check."""
    c = q.c
    if c == 1:
        return 1.0 + 0.0j
    inv = inverse_table(c)
    total = 0.0 + 0.0j
    for b in range(1, c):
        bi = inv[b]
        if bi < 0:
            continue
        total += cmath.exp(1j * TWO_PI * ((q.m * b + q.n * bi) % c) / c)
    return total


def kloosterman_grid(ms: list[int], ns: list[int], c: int) -> np.ndarray:
    """S(m, n; c) for every (m, n) in ms x ns, shape (len(ms), len(ns)).

    Vectorized companion of kloosterman() for scans; agrees with it to
    summation roundoff (~1e-12 at c ~ 10^3).
    """
    if c < 1:
        raise ValidationError(f"modulus must be >= 1, got {c}")
    if c == 1:
        return np.ones((len(ms), len(ns)))
    inv = np.asarray(inverse_table(c), dtype=np.int64)
    units = np.nonzero(inv >= 0)[0]
    invs = inv[units]
    m_arr = np.asarray(ms, dtype=np.int64)
    m_phase = (m_arr[:, None] * units[None, :]) % c
    out = np.empty((len(ms), len(ns)))
    for j, n in enumerate(ns):
        k = (m_phase + (int(n) * invs) % c) % c
        out[:, j] = np.sum(np.cos(TWO_PI * k / c), axis=1)
    return out


def ramanujan(q: int, n: int) -> int:
    """r_q(n) = sum over d | gcd(q, n) of d * mu(q/d); r_q(0) = phi(q)."""
    if q < 1:
        raise ValidationError(f"modulus must be >= 1, got {q}")
    g = q if n == 0 else math.gcd(q, abs(n))
    total = 0
    d = 1
    while d * d <= g:
        if g % d == 0:
            total += d * mobius(q // d)
            if d != g // d:
                total += (g // d) * mobius(q // (g // d))
        d += 1
    return total


def salie(m: int, n: int, c: int) -> complex:
    """Jacobi-twisted Kloosterman-type sum for odd c; c = 1 gives 1."""
    if c < 1:
        raise ValidationError(f"modulus must be >= 1, got {c}")
    if c % 2 == 0:
        raise EvenModulus(f"odd modulus required, got {c}")
    if c == 1:
        return 1.0 + 0.0j
    inv = inverse_table(c)
    total = 0.0 + 0.0j
    for b in range(1, c):
        bi = inv[b]
        if bi < 0:
            continue
        total += jacobi(b, c) * cmath.exp(1j * TWO_PI * ((m * b + n * bi) % c) / c)
    return total


class WeilGap(NamedTuple):
    value: float
    degenerate: bool


def weil_gap(q: KloostermanQuery) -> WeilGap:
    """|S(m, n; c)| / (tau(c) sqrt(c) sqrt(gcd(m, n, c))).

    At most 1 whenever the square-root cancellation bound applies.  The case
    m = n = 0 (mod c), where |S| = phi(c), is flagged as degenerate.
    """
    c = q.c
    s = abs(kloosterman(q))
    g = gcd(gcd(q.m, q.n), c)
    if g == 0:
        g = c
    bound = tau(c) * math.sqrt(c) * math.sqrt(g)
    degenerate = q.m % c == 0 and q.n % c == 0
    return WeilGap(s / bound, degenerate)


def twisted_poisson_residual(
    spec: WeightSpec, a: int, q: int, scale: float, quad: QuadratureSpec
) -> float:
    """Residual of the inverse-twisted summation identity for g(x) = V(x/scale).

    Left side: sum over n coprime to q of g(n) e(a n^{-1} / q).
    Right side: (1/q) * sum over n of ghat(n/q) S(n, a, q), where
    ghat(xi) = scale * Vhat(scale * xi); the n-sum stops once the transform
    factor stays below 1e-14.  Both sides are computed independently.
    """
    if q < 2:
        raise ValidationError(f"q must be >= 2, got {q}")
    if not (scale > 0.0):
        raise ValidationError(f"scale must be positive, got {scale}")
    inv = inverse_table(q)
    lo = math.floor(scale) + 1
    hi = math.ceil(2.0 * scale) - 1
    lhs = 0.0 + 0.0j
    for n in range(lo, hi + 1):
        bi = inv[n % q]
        if bi < 0:
            continue
        w = eval_weight(spec, n / scale)
        lhs += w * cmath.exp(1j * TWO_PI * ((a * bi) % q) / q)

    def ghat(nn: int) -> complex:
        return scale * fourier(spec, scale * nn / q, quad)

    rhs = ghat(0) * kloosterman(KloostermanQuery(0, a, q)) / q
    small_run = 0
    n = 1
    while small_run < 3:
        hit = 0.0
        for nn in (n, -n):
            g = ghat(nn)
            hit = max(hit, abs(g))
            rhs += g * kloosterman(KloostermanQuery(nn, a, q)) / q
        if hit < TRUNCATION_FLOOR:
            small_run += 1
        else:
            small_run = 0
        n += 1
    return abs(lhs - rhs)
