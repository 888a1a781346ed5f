import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from detcount.arith import (
    divisors,
    euler_phi,
    factorize,
    gcd,
    is_prime,
    jacobi,
    mobius,
    mod_inverse,
    sigma,
    tau,
)
from detcount.errors import NotInvertible, ValidationError


@pytest.mark.parametrize("a,b,expected", [(12, 18, 6), (0, 7, 7), (-4, 6, 2), (0, 0, 0)])
def test_gcd_examples(a, b, expected):
    assert gcd(a, b) == expected


@pytest.mark.parametrize("a,q,expected", [(3, 7, 5), (1, 2, 1), (1, 97, 1), (10, 1, 0)])
def test_mod_inverse_examples(a, q, expected):
    assert mod_inverse(a, q) == expected


def test_mod_inverse_rejects_non_units():
    with pytest.raises(NotInvertible):
        mod_inverse(2, 4)


@given(
    q=st.integers(min_value=2, max_value=2**62),
    a=st.integers(min_value=1, max_value=2**62),
)
@settings(max_examples=300)
def test_mod_inverse_property(q, a):
    if math.gcd(a, q) != 1:
        with pytest.raises(NotInvertible):
            mod_inverse(a, q)
    else:
        inv = mod_inverse(a, q)
        assert 0 <= inv < q
        assert (inv * a) % q == 1


@pytest.mark.parametrize("n,expected", [(1, 1), (12, 0), (30, -1), (2, -1), (6, 1)])
def test_mobius_examples(n, expected):
    assert mobius(n) == expected


@pytest.mark.parametrize(
    "n,expected", [(1, [1]), (6, [1, 2, 3, 6]), (49, [1, 7, 49]), (97, [1, 97])]
)
def test_divisors_examples(n, expected):
    assert divisors(n) == expected


@pytest.mark.parametrize("n,expected", [(1, 1), (6, 12), (10, 18)])
def test_sigma_examples(n, expected):
    assert sigma(n) == expected


def test_mobius_sum_is_unit_indicator():
    for n in range(1, 10_001):
        total = sum(mobius(d) for d in divisors(n))
        assert total == (1 if n == 1 else 0), n


def test_sigma_matches_divisor_sum():
    for n in range(1, 10_001):
        assert sigma(n) == sum(divisors(n))


@given(st.integers(min_value=1, max_value=3000), st.integers(min_value=1, max_value=3000))
@settings(max_examples=1000)
def test_multiplicativity_on_coprime_pairs(m, n):
    if math.gcd(m, n) != 1:
        return
    assert sigma(m * n) == sigma(m) * sigma(n)
    assert mobius(m * n) == mobius(m) * mobius(n)
    assert tau(m * n) == tau(m) * tau(n)
    assert euler_phi(m * n) == euler_phi(m) * euler_phi(n)


def test_factorize_reassembles():
    for n in (1, 2, 97, 360, 1024, 9991):
        prod = 1
        for p, e in factorize(n):
            assert is_prime(p)
            prod *= p**e
        assert prod == n


@pytest.mark.parametrize("fn", [mobius, divisors, sigma, tau, euler_phi])
def test_nonpositive_rejected(fn):
    with pytest.raises(ValidationError):
        fn(0)
    with pytest.raises(ValidationError):
        fn(-5)


def test_jacobi_against_legendre():
    # for odd primes p the symbol matches Euler's criterion
    for p in (3, 5, 7, 11, 13, 17, 19, 23):
        for a in range(0, p):
            euler = pow(a, (p - 1) // 2, p)
            expected = 0 if euler == 0 else (1 if euler == 1 else -1)
            assert jacobi(a, p) == expected


def test_jacobi_multiplicative_in_top():
    for n in (9, 15, 21, 45):
        for a in range(1, 30):
            for b in range(1, 30):
                assert jacobi(a * b, n) == jacobi(a, n) * jacobi(b, n)
