"""Smoothed count of a*d - b*c = 1 (mod p) and its density prediction X^4/p.

Since X < p/2, the congruence pins d to at most one integer of the window for
each (a, b, c), so the count is a cubic loop.  The prediction is
X^4/p * (integral of V)^4; the gap E = S - M is reported per X^2.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable, Iterable

from .arith import is_prime
from .counting import CountResult, KahanSum, enumerate_range, weight_table
from .errors import CompositeModulus, QuadratureNotConverged, ValidationError
from .weights import QuadratureSpec, WeightSpec, fourier, integral


@dataclass(frozen=True)
class ModPQuery:
    """Odd prime p, window X with p^(1/100) < X < p/2, and a reporting scale."""

    p: int
    X: float
    g_scale: float = 1.0

    def __post_init__(self) -> None:
        if self.p < 3 or not is_prime(self.p):
            raise CompositeModulus(f"p must be an odd prime, got {self.p}")
        if not (self.p ** (1.0 / 100.0) < self.X < self.p / 2.0):
            raise ValidationError(
                f"X must satisfy p^(1/100) < X < p/2; got X={self.X}, p={self.p}"
            )
        if not (self.g_scale >= 1.0):
            raise ValidationError(f"g_scale must be >= 1, got {self.g_scale}")


@dataclass(frozen=True)
class ModPScanRow:
    p: int
    X: float
    S: float
    M: float
    E: float
    E_over_X2: float


def count_modp(spec: WeightSpec, q: ModPQuery) -> CountResult:
    """Weighted count over the window cubed; d = (1 + b c) a^{-1} mod p.

    The window is shorter than p, so the residue class of d meets it in at
    most one integer.  Accumulation is compensated, ascending in (a, b, c).
    """
    t0 = time.perf_counter()
    p = q.p
    rng = enumerate_range(q.X)
    lo, hi = rng.start, rng.stop - 1
    W = weight_table(spec, q.X, rng)
    acc = KahanSum()
    count = 0
    for a in rng:
        # a < 2X < p, so a is always a unit mod p
        abar = pow(a, -1, p)
        wa = W[a - lo]
        for b in rng:
            wab = wa * W[b - lo]
            bp = b % p
            for c in rng:
                d = ((1 + bp * c) * abar) % p
                if lo <= d <= hi:
                    assert (a * d - b * c) % p == 1
                    w = wab * W[c - lo] * W[d - lo]
                    if w != 0.0:
                        acc.add(w)
                        count += 1
    return CountResult(acc.value, count, time.perf_counter() - t0)


def modp_main(spec: WeightSpec, q: ModPQuery, quad: QuadratureSpec) -> float:
    """X^4/p times (integral of V)^4, cross-checked against the transform at 0."""
    iv = integral(spec, quad)
    f0 = fourier(spec, 0.0, quad)
    if abs(f0 - iv) > max(10.0 * quad.abs_tolerance, 1e-12):
        raise QuadratureNotConverged(
            f"transform at 0 ({f0}) disagrees with the integral ({iv})"
        )
    return q.X**4 / q.p * iv**4


def _scan_one(args: tuple[WeightSpec, int, float, float, QuadratureSpec]) -> ModPScanRow:
    spec, p, X, g_scale, quad = args
    q = ModPQuery(p, X, g_scale)
    S = count_modp(spec, q).weighted_sum
    M = modp_main(spec, q, quad)
    E = S - M
    return ModPScanRow(p, X, S, M, E, E / (X * X))


def modp_error_scan(
    spec: WeightSpec,
    primes: Iterable[int],
    x_rule: Callable[[int], float],
    quad: QuadratureSpec,
    g_scale: float = 1.0,
) -> list[ModPScanRow]:
    """One row (p, X, S, M, E, E/X^2) per prime, in input order.

    Rows are independent; DETCOUNT_THREADS > 1 spreads them over worker
    processes, results still collected in input order.
    """
    from .experiments import threads_from_env

    tasks = [(spec, p, x_rule(p), g_scale, quad) for p in primes]
    threads = threads_from_env()
    if threads == 1 or len(tasks) <= 1:
        return [_scan_one(t) for t in tasks]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(_scan_one, tasks))


def two_sqrt_rule(p: int) -> float:
    """The default window rule X = ceil(2 sqrt(p))."""
    return float(math.ceil(2.0 * math.sqrt(p)))


def vhat_tail_sum(spec: WeightSpec, x: float, quad: QuadratureSpec) -> float:
    """sum over n != 0 of Vhat(n/x), truncated once terms stay below 1e-14.

    Used to verify the O(x) envelope of the nonzero-frequency transform sum.
    """
    if not (x > 0.0):
        raise ValidationError(f"x must be positive, got {x}")
    total = 0.0 + 0.0j
    small_run = 0
    n = 1
    while small_run < 3:
        hit = 0.0
        for nn in (n, -n):
            term = fourier(spec, nn / x, quad)
            hit = max(hit, abs(term))
            total += term
        if hit < 1e-14:
            small_run += 1
        else:
            small_run = 0
        n += 1
    return abs(total)
