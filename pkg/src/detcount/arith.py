"""Exact integer arithmetic: gcd, modular inverses, Mobius, divisors.

Everything here is deterministic trial-division arithmetic sized for desk-scale
inputs (factored arguments up to ~10^9).  No floating point.
"""

from __future__ import annotations

import math

from .errors import NotInvertible, ValidationError


def gcd(a: int, b: int) -> int:
    """Greatest common divisor on absolute values; gcd(0, 0) = 0."""
    return math.gcd(abs(a), abs(b))


def mod_inverse(a: int, q: int) -> int:
    """Inverse of a modulo q, in [0, q).  For q = 1 returns 0.

    Raises NotInvertible when gcd(a, q) > 1.
    """
    if q < 1:
        raise ValidationError(f"modulus must be >= 1, got {q}")
    if q == 1:
        return 0
    if math.gcd(a % q, q) != 1:
        raise NotInvertible(f"{a} is not invertible mod {q}")
    return pow(a, -1, q)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(p, e), ...] by trial division, p ascending."""
    if n < 1:
        raise ValidationError(f"factorize requires n >= 1, got {n}")
    out: list[tuple[int, int]] = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def mobius(n: int) -> int:
    """Mobius function: 0 on square divisors, else (-1)^(number of primes)."""
    if n < 1:
        raise ValidationError(f"mobius requires n >= 1, got {n}")
    if n == 1:
        return 1
    sign = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        sign = -sign
    return sign


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    if n < 1:
        raise ValidationError(f"divisors requires n >= 1, got {n}")
    small: list[int] = []
    large: list[int] = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def sigma(n: int) -> int:
    """Sum of divisors."""
    if n < 1:
        raise ValidationError(f"sigma requires n >= 1, got {n}")
    total = 1
    for p, e in factorize(n):
        total *= (p ** (e + 1) - 1) // (p - 1)
    return total


def tau(n: int) -> int:
    """Number of divisors."""
    if n < 1:
        raise ValidationError(f"tau requires n >= 1, got {n}")
    total = 1
    for _, e in factorize(n):
        total *= e + 1
    return total


def euler_phi(n: int) -> int:
    """Euler totient."""
    if n < 1:
        raise ValidationError(f"euler_phi requires n >= 1, got {n}")
    total = n
    for p, _ in factorize(n):
        total -= total // p
    return total


def is_prime(n: int) -> bool:
    """Primality by trial division; intended for n <= ~10^12."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a|n) for odd n >= 1, by quadratic reciprocity."""
    if n < 1 or n % 2 == 0:
        raise ValidationError(f"jacobi requires odd n >= 1, got {n}")
    a %= n
    result = 1
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0
