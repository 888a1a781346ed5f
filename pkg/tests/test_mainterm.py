import math
from fractions import Fraction

import numpy as np
import pytest

from detcount.arith import mobius
from detcount.counting import CountQuery
from detcount.mainterm import (
    RAMANUJAN_EXPONENT_THETA,
    ZETA2_INV,
    divisor_factor,
    error_term,
    k_constant,
    main_term_closed,
    main_term_truncated,
    mvt_envelope_constant,
    reduced_integral,
    sup_weight_derivative,
)
from detcount.weights import QuadratureSpec, WeightSpec, eval_weight_array

SPEC = WeightSpec()
QUAD = QuadratureSpec(abs_tolerance=1e-13, max_depth=6)


def test_theta_constant():
    assert RAMANUJAN_EXPONENT_THETA == 7.0 / 64.0


def test_zeta2_inverse():
    assert ZETA2_INV == pytest.approx(0.6079271018540267, rel=1e-15)


def test_divisor_factor_exact_rationals():
    assert divisor_factor(6) == Fraction(2, 1)
    assert divisor_factor(-6) == Fraction(2, 1)
    assert divisor_factor(1) == 1
    # sum over divisors of 1/l equals sigma(|r|)/|r| exactly
    for r in range(1, 10_001):
        from detcount.arith import divisors, sigma

        direct = sum(Fraction(1, d) for d in divisors(r))
        assert direct == Fraction(sigma(r), r)
        assert divisor_factor(r) == direct


def test_reduced_integral_vanishes_beyond_support():
    assert reduced_integral(SPEC, 3.0, QUAD) == 0.0
    assert reduced_integral(SPEC, -3.0, QUAD) == 0.0
    assert reduced_integral(SPEC, 17.5, QUAD) == 0.0


def test_reduced_integral_against_monte_carlo():
    rng = np.random.default_rng(424242)
    n = 10**7
    u = rng.uniform(1.0, 2.0, n)
    v = rng.uniform(1.0, 2.0, n)
    t = rng.uniform(1.0, 2.0, n)
    vals = (
        (1.0 / t)
        * eval_weight_array(SPEC, u)
        * eval_weight_array(SPEC, v)
        * eval_weight_array(SPEC, t)
        * eval_weight_array(SPEC, u * v / t)
    )
    mean = vals.mean()
    se = vals.std(ddof=1) / math.sqrt(n)
    assert abs(reduced_integral(SPEC, 0.0, QUAD) - mean) < 3.0 * se


def test_reduced_integral_continuity_on_grid():
    # no isolated jumps: every increment on the 0.25-grid stays within 10x
    # the neighbouring increments (plus a floor for the flat tails)
    alphas = np.arange(-3.0, 3.0 + 1e-9, 0.25)
    vals = [reduced_integral(SPEC, float(a), QUAD) for a in alphas]
    increments = [abs(b - a) for a, b in zip(vals, vals[1:])]
    floor = 1e-3 * max(increments)
    for i, inc in enumerate(increments):
        neighbours = [increments[j] for j in (i - 1, i + 1) if 0 <= j < len(increments)]
        assert inc <= 10.0 * max(neighbours) + floor, (alphas[i], inc)


def test_mobius_partial_sums_approach_zeta2_inverse():
    for K in (10, 100, 1000):
        partial = sum(mobius(k) / k**2 for k in range(1, K + 1))
        assert abs(partial - ZETA2_INV) < 1.0 / K


def test_truncated_k1_single_term():
    q = CountQuery(50.0, 6)
    b = main_term_truncated(SPEC, q, 1, QUAD)
    # only k=1 survives: sum over l | 6 of X^2/l * I(alpha)
    expected = 50.0**2 * float(Fraction(12, 6)) * b.I_alpha
    assert b.truncated_value == pytest.approx(expected, rel=1e-12)
    assert b.tail_bound == pytest.approx(50.0**2 * 2.0, rel=1e-12)


@pytest.mark.parametrize("X,r", [(50.0, 1), (100.0, 6), (100.0, -6)])
def test_closed_matches_truncated(X, r):
    q = CountQuery(X, r)
    b = main_term_truncated(SPEC, q, 2000, QUAD)
    assert b.truncated_value is not None
    assert abs(b.closed_form - b.truncated_value) <= b.tail_bound + 1e-6 * abs(b.closed_form)


def test_closed_truncated_within_tail_for_small_k():
    q = CountQuery(100.0, 1)
    for K in (10, 100, 1000):
        b = main_term_truncated(SPEC, q, K, QUAD)
        assert abs(b.closed_form - b.truncated_value) <= b.tail_bound


def test_k_constant_examples():
    i0 = reduced_integral(SPEC, 0.0, QUAD)
    assert k_constant(SPEC, 1, QUAD) == pytest.approx(ZETA2_INV * i0, rel=1e-13)
    ratio = k_constant(SPEC, 2, QUAD) / k_constant(SPEC, 1, QUAD)
    assert ratio == pytest.approx(1.5, rel=1e-13)


def test_k_constant_envelope_at_x100():
    X = 100.0
    envelope = mvt_envelope_constant(SPEC, QUAD)
    for r in (1, 5, 25):
        m = main_term_closed(SPEC, CountQuery(X, r), QUAD)
        k = k_constant(SPEC, r, QUAD)
        assert abs(m.closed_form / X**2 - k) <= envelope * abs(r) / X**2


def test_sup_weight_derivative_positive_and_stable():
    coarse = sup_weight_derivative(SPEC, samples=50_001)
    fine = sup_weight_derivative(SPEC, samples=200_001)
    assert fine > 0.0
    assert coarse == pytest.approx(fine, rel=1e-4)


def test_error_term_zero_out_of_support():
    # both the count and the prediction vanish for |r| >= 3 X^2
    assert error_term(SPEC, CountQuery(3.0, 100), QUAD) == 0.0


def test_error_term_symmetry_both_sides_computed():
    e_plus = error_term(SPEC, CountQuery(20.0, 3), QUAD)
    e_minus = error_term(SPEC, CountQuery(20.0, -3), QUAD)
    assert e_minus == pytest.approx(e_plus, rel=1e-9, abs=1e-15)


def test_error_envelope_at_x40():
    assert abs(error_term(SPEC, CountQuery(40.0, 1), QUAD)) < 40.0**1.3
