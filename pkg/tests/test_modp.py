import pytest

from detcount.counting import KahanSum, enumerate_range
from detcount.errors import CompositeModulus, QuadratureNotConverged, ValidationError
from detcount.modp import (
    ModPQuery,
    count_modp,
    modp_error_scan,
    modp_main,
    two_sqrt_rule,
    vhat_tail_sum,
)
from detcount.weights import QuadratureSpec, WeightSpec, eval_weight, integral

SPEC = WeightSpec()
QUAD = QuadratureSpec()


def quadruple_loop_oracle(spec, p, X):
    rng = enumerate_range(X)
    acc = KahanSum()
    count = 0
    for a in rng:
        for b in rng:
            for c in rng:
                for d in rng:
                    if (a * d - b * c) % p == 1:
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


def test_query_validation():
    with pytest.raises(CompositeModulus):
        ModPQuery(15, 3.0)
    with pytest.raises(CompositeModulus):
        ModPQuery(2, 0.9)
    with pytest.raises(ValidationError):
        ModPQuery(13, 7.0)  # X >= p/2
    with pytest.raises(ValidationError):
        ModPQuery(10007, 1.0)  # X <= p^(1/100)
    q = ModPQuery(13, 3.0)
    assert q.g_scale == 1.0


@pytest.mark.parametrize("p,X", [(13, 3.0), (101, 12.0), (97, 10.5), (37, 8.0)])
def test_oracle_equivalence_exact(p, X):
    res = count_modp(SPEC, ModPQuery(p, X))
    oracle_sum, oracle_count = quadruple_loop_oracle(SPEC, p, X)
    assert res.weighted_sum == oracle_sum
    assert res.solution_count == oracle_count


def test_zero_amplitude():
    res = count_modp(WeightSpec(amplitude=0.0), ModPQuery(101, 12.0))
    assert res.weighted_sum == 0.0
    assert res.solution_count == 0


def test_determinism_bit_identical():
    q = ModPQuery(211, 17.0)
    a = count_modp(SPEC, q)
    b = count_modp(SPEC, q)
    assert a.weighted_sum == b.weighted_sum
    assert a.solution_count == b.solution_count


def test_modp_main_scaling_and_consistency():
    q = ModPQuery(1009, 64.0)
    base = modp_main(SPEC, q, QUAD)
    sixteen = modp_main(WeightSpec(amplitude=2.0), q, QUAD)
    assert sixteen == pytest.approx(16.0 * base, rel=1e-12)
    iv = integral(SPEC, QUAD)
    assert base == pytest.approx(64.0**4 / 1009 * iv**4, rel=1e-12)


def test_modp_main_not_converged_propagates():
    bad = QuadratureSpec(panels_per_axis=1, nodes_per_panel=4, abs_tolerance=1e-16, max_depth=1)
    with pytest.raises(QuadratureNotConverged):
        modp_main(SPEC, ModPQuery(101, 12.0), bad)


def test_two_sqrt_rule():
    assert two_sqrt_rule(1009) == 64.0
    assert two_sqrt_rule(4001) == 127.0
    assert two_sqrt_rule(10007) == 201.0


def test_scan_parallel_matches_sequential(monkeypatch):
    monkeypatch.setenv("DETCOUNT_THREADS", "2")
    par = modp_error_scan(SPEC, [13, 101], lambda p: 5.0, QUAD)
    monkeypatch.delenv("DETCOUNT_THREADS")
    seq = modp_error_scan(SPEC, [13, 101], lambda p: 5.0, QUAD)
    assert par == seq


def test_scan_rows_in_order_and_empty():
    assert modp_error_scan(SPEC, [], two_sqrt_rule, QUAD) == []
    rows = modp_error_scan(SPEC, [101, 211], lambda p: 12.0, QUAD)
    assert [row.p for row in rows] == [101, 211]
    for row in rows:
        assert row.E == pytest.approx(row.S - row.M, abs=1e-18)
        assert row.E_over_X2 == pytest.approx(row.E / row.X**2, rel=1e-15)


def test_vhat_tail_sum_envelope():
    # the nonzero-frequency transform sum stays O(x); fit the constant at
    # x = 2 and check it holds across the grid
    xs = [2.0, 5.0, 10.0, 20.0]
    vals = [vhat_tail_sum(SPEC, x, QUAD) for x in xs]
    c_fit = vals[0] / xs[0]
    for x, v in zip(xs, vals):
        assert v <= 10.0 * c_fit * x + 1e-12
