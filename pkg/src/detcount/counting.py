"""Smoothed counts of integer solutions to the determinant equation a*d - b*c = r.

Solutions are weighted by V(a/X) V(b/X) V(c/X) V(d/X); only the open window
(X, 2X) contributes.  Two enumerators are provided: a cubic-time reference
loop and a congruence-class enumerator that walks c along an arithmetic
progression mod a/gcd(a,b).  Both visit the identical solution tuples in
ascending (a, b, c) order and accumulate with compensated summation, so their
results agree bit for bit.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .errors import EmptyRange, InvalidR, ValidationError
from .weights import WeightSpec, eval_weight


@dataclass(frozen=True)
class CountQuery:
    """Window size X (>= 3) and a nonzero shift r.

    Nothing can solve a*d - b*c = r with all four factors in (X, 2X) once
    |r| >= 3 X^2, so such queries simply count zero; the scan harnesses
    reject them up front instead.
    """

    X: float
    r: int

    def __post_init__(self) -> None:
        if not (self.X >= 3.0) or not math.isfinite(self.X):
            raise ValidationError(f"X must be finite and >= 3, got {self.X}")
        if self.r == 0:
            raise InvalidR("r must be nonzero")

    @property
    def in_support(self) -> bool:
        return abs(self.r) < 3.0 * self.X * self.X


@dataclass(frozen=True)
class CountResult:
    weighted_sum: float
    solution_count: int
    elapsed: float


class KahanSum:
    """Compensated summation; order of add() calls fixes the result exactly."""

    __slots__ = ("value", "_c")

    def __init__(self) -> None:
        self.value = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        y = x - self._c
        t = self.value + y
        self._c = (t - self.value) - y
        self.value = t


def enumerate_range(X: float) -> range:
    """Integers n with X < n < 2X, i.e. [floor(X)+1, ceil(2X)-1]."""
    if not (X > 0.0):
        raise ValidationError(f"X must be positive, got {X}")
    lo = math.floor(X) + 1
    hi = math.ceil(2.0 * X) - 1
    if lo > hi:
        raise EmptyRange(f"no integers strictly between {X} and {2.0 * X}")
    return range(lo, hi + 1)


def weight_table(spec: WeightSpec, X: float, rng: range) -> list[float]:
    """Memoized V(n/X) for n in rng, indexed by n - rng.start."""
    return [eval_weight(spec, n / X) for n in rng]


def count_naive(spec: WeightSpec, q: CountQuery) -> CountResult:
    """Reference enumerator: loop over (a, b, c), accept when a | (r + b*c).

    Cubic in the window size; use count_fast for anything beyond X ~ 60.
    """
    t0 = time.perf_counter()
    rng = enumerate_range(q.X)
    lo, hi = rng.start, rng.stop - 1
    W = weight_table(spec, q.X, rng)
    acc = KahanSum()
    count = 0
    for a in rng:
        wa = W[a - lo]
        for b in rng:
            wab = wa * W[b - lo]
            for c in rng:
                num = q.r + b * c
                if num % a == 0:
                    d = num // a
                    if lo <= d <= hi:
                        w = wab * W[c - lo] * W[d - lo]
                        if w != 0.0:
                            acc.add(w)
                            count += 1
    return CountResult(acc.value, count, time.perf_counter() - t0)


def count_fast(spec: WeightSpec, q: CountQuery) -> CountResult:
    """Congruence-class enumerator, near-quadratic in the window size.

    For each (a, b): solutions in c of b*c = -r (mod a) exist iff
    g = gcd(b, a) divides r, and then form the progression
    c = -(r/g) * (b/g)^{-1}  (mod a/g).  Walking that progression through the
    window and recovering d = (r + b*c)/a visits exactly the tuples of
    count_naive, in the same (a, b, c) order.
    """
    t0 = time.perf_counter()
    rng = enumerate_range(q.X)
    lo, hi = rng.start, rng.stop - 1
    W = weight_table(spec, q.X, rng)
    r = q.r
    acc = KahanSum()
    count = 0
    for a in rng:
        wa = W[a - lo]
        for b in rng:
            g = math.gcd(b, a)
            if r % g:
                continue
            a1 = a // g
            if a1 == 1:
                c = lo
            else:
                c0 = (-(r // g) * pow(b // g, -1, a1)) % a1
                c = lo + ((c0 - lo) % a1)
            wab = wa * W[b - lo]
            while c <= hi:
                d = (r + b * c) // a
                if lo <= d <= hi:
                    assert a * d - b * c == r
                    w = wab * W[c - lo] * W[d - lo]
                    if w != 0.0:
                        acc.add(w)
                        count += 1
                c += a1
    return CountResult(acc.value, count, time.perf_counter() - t0)
