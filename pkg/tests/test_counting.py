import math

import pytest

from detcount.counting import (
    CountQuery,
    KahanSum,
    count_fast,
    count_naive,
    enumerate_range,
)
from detcount.errors import EmptyRange, InvalidR, ValidationError
from detcount.weights import WeightSpec, eval_weight

SPEC = WeightSpec()


def quadruple_loop_oracle(spec, X, r):
    """O(X^4) reference: scan every (a, b, c, d) tuple directly."""
    rng = enumerate_range(X)
    acc = KahanSum()
    count = 0
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if a * d - b * c == r:
                        w = (
                            eval_weight(spec, a / X)
                            * eval_weight(spec, b / X)
                            * eval_weight(spec, c / X)
                            * eval_weight(spec, d / X)
                        )
                        if w != 0.0:
                            acc.add(w)
                            count += 1
    return acc.value, count


@pytest.mark.parametrize(
    "X,expected",
    [(3.0, [4, 5]), (10.0, list(range(11, 20))), (3.5, [4, 5, 6])],
)
def test_enumerate_range_examples(X, expected):
    assert list(enumerate_range(X)) == expected


def test_enumerate_range_empty():
    # the open interval (1, 2) holds no integer, nor does (0.3, 0.6)
    with pytest.raises(EmptyRange):
        enumerate_range(1.0)
    with pytest.raises(EmptyRange):
        enumerate_range(0.3)


def test_count_query_validation():
    with pytest.raises(InvalidR):
        CountQuery(10.0, 0)
    with pytest.raises(ValidationError):
        CountQuery(2.0, 1)
    assert not CountQuery(3.0, 100).in_support
    assert CountQuery(10.0, 5).in_support


def test_small_case_exact_value():
    # X=3, r=4: the only solutions in {4,5}^4 are (4,4,4,5) and (5,4,4,4),
    # each weighted exp(-4.5)^3 * exp(-4.5) = exp(-18).
    oracle_sum, oracle_count = quadruple_loop_oracle(SPEC, 3.0, 4)
    assert oracle_count == 2
    assert oracle_sum == pytest.approx(2.0 * math.exp(-18.0), rel=1e-15)
    res = count_naive(SPEC, CountQuery(3.0, 4))
    assert res.weighted_sum == oracle_sum
    assert res.solution_count == 2
    fast = count_fast(SPEC, CountQuery(3.0, 4))
    assert fast.weighted_sum == oracle_sum
    assert fast.solution_count == 2


def test_out_of_support_counts_zero():
    res = count_naive(SPEC, CountQuery(3.0, 100))
    assert res.weighted_sum == 0.0
    assert res.solution_count == 0


def test_naive_matches_quadruple_loop_at_x10():
    oracle_sum, oracle_count = quadruple_loop_oracle(SPEC, 10.0, 1)
    res = count_naive(SPEC, CountQuery(10.0, 1))
    assert res.weighted_sum == oracle_sum
    assert res.solution_count == oracle_count


def test_fast_equals_naive_on_grid():
    for X in (4.0, 5.5, 7.0, 9.0, 12.0):
        for r in (-20, -7, -1, 1, 3, 20):
            q = CountQuery(X, r)
            a = count_naive(SPEC, q)
            b = count_fast(SPEC, q)
            assert b.weighted_sum == a.weighted_sum, (X, r)
            assert b.solution_count == a.solution_count, (X, r)


def test_fast_matches_naive_at_x100():
    q = CountQuery(100.0, 1)
    a = count_naive(SPEC, q)
    b = count_fast(SPEC, q)
    assert b.solution_count == a.solution_count
    assert b.weighted_sum == pytest.approx(a.weighted_sum, rel=1e-12)


def test_fast_matches_convolution_oracle():
    # independent algorithm: build the weighted multiplication table
    # D(n) = sum over window pairs with a*d = n, then correlate at lag r
    for X, r in ((40.0, 1), (25.0, -6)):
        rng = enumerate_range(X)
        table: dict[int, float] = {}
        for a in rng:
            wa = eval_weight(SPEC, a / X)
            for d in rng:
                table[a * d] = table.get(a * d, 0.0) + wa * eval_weight(SPEC, d / X)
        conv = sum(v * table[n - r] for n, v in table.items() if n - r in table)
        fast = count_fast(SPEC, CountQuery(X, r)).weighted_sum
        assert fast == pytest.approx(conv, rel=1e-12)


def test_symmetry_in_r():
    # swapping (a, d) <-> (b, c) matches solutions of r with those of -r
    import random

    rnd = random.Random(1234)
    for _ in range(50):
        X = rnd.uniform(4.0, 14.0)
        r = rnd.choice([s for s in range(-25, 26) if s != 0])
        plus = count_fast(SPEC, CountQuery(X, r))
        minus = count_fast(SPEC, CountQuery(X, -r))
        assert plus.solution_count == minus.solution_count
        if plus.weighted_sum != 0.0:
            assert minus.weighted_sum == pytest.approx(plus.weighted_sum, rel=1e-12)


def test_weighted_sum_zero_iff_no_solutions():
    for X in (4.0, 6.5):
        for r in (1, 5, 40, 1000):
            res = count_fast(SPEC, CountQuery(X, r))
            assert (res.weighted_sum == 0.0) == (res.solution_count == 0)


def test_monotone_support_boundary():
    # X=4 has window {5, 6, 7}: the largest representable shift is
    # max(ad) - min(bc) = 49 - 25 = 24, so counts vanish from r = 25 on
    assert count_fast(SPEC, CountQuery(4.0, 24)).solution_count == 1
    for r in range(25, 31):
        assert count_fast(SPEC, CountQuery(4.0, r)).weighted_sum == 0.0


def test_zero_amplitude_weight():
    res = count_fast(WeightSpec(amplitude=0.0), CountQuery(6.0, 2))
    assert res.weighted_sum == 0.0
    assert res.solution_count == 0
