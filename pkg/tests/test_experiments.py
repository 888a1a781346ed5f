import math

import pytest

from detcount.errors import InvalidR, ValidationError
from detcount.experiments import error_scan, r_scan, threads_from_env
from detcount.weights import QuadratureSpec, WeightSpec

SPEC = WeightSpec()
QUAD = QuadratureSpec(abs_tolerance=1e-12, max_depth=6)


def test_error_scan_rows_and_fit():
    report = error_scan(SPEC, 1, [8.0, 12.0, 16.0], QUAD)
    assert [row.X for row in report.rows] == [8.0, 12.0, 16.0]
    for row in report.rows:
        assert row.E == row.S - row.M
        assert row.abs_E == abs(row.E)
        assert row.ratio == pytest.approx(row.abs_E / row.X**1.2, rel=1e-15)
    assert math.isfinite(report.fitted_slope)
    assert report.max_abs_E == max(row.abs_E for row in report.rows)


def test_error_scan_single_row_has_nan_slope():
    report = error_scan(SPEC, 1, [10.0], QUAD)
    assert math.isnan(report.fitted_slope)
    assert math.isnan(report.fit_intercept)


def test_error_scan_validation():
    with pytest.raises(ValidationError):
        error_scan(SPEC, 1, [], QUAD)
    with pytest.raises(ValidationError):
        error_scan(SPEC, 1, [10.0, 9.0], QUAD)
    with pytest.raises(InvalidR):
        error_scan(SPEC, 0, [10.0], QUAD)
    with pytest.raises(InvalidR):
        error_scan(SPEC, 400, [10.0, 20.0], QUAD)  # 400 >= 3*100


def test_error_scan_symmetric_in_r_sign():
    plus = error_scan(SPEC, 2, [8.0, 12.0], QUAD)
    minus = error_scan(SPEC, -2, [8.0, 12.0], QUAD)
    for a, b in zip(plus.rows, minus.rows):
        assert b.S == pytest.approx(a.S, rel=1e-12)


def test_r_scan_dedup_and_validation():
    report = r_scan(SPEC, 12.0, [3, 1, 3, -2, 1], QUAD)
    assert [row.r for row in report.rows] == [3, 1, -2]
    assert math.isnan(report.fitted_slope)  # single X cannot support a fit
    with pytest.raises(InvalidR):
        r_scan(SPEC, 12.0, [1, 0], QUAD)
    with pytest.raises(InvalidR):
        r_scan(SPEC, 5.0, [100], QUAD)  # 100 >= 3*25
    with pytest.raises(ValidationError):
        r_scan(SPEC, 12.0, [], QUAD)


@pytest.mark.xfail(
    strict=True,
    reason="measured: max|E| ~ 1.0e-5 concentrates at divisor-rich r (24, 30, 36), "
    "~77x the r=1 level, far beyond the r^(7/64) ~ 1.5 allowance; the error grows "
    "with the divisor count of r at this scale, so the r=1-calibrated envelope fails",
)
def test_r_scan_envelope_calibrated_at_r1():
    tight = QuadratureSpec(abs_tolerance=1e-13, max_depth=6)
    cal = error_scan(SPEC, 1, [40.0, 60.0, 90.0, 135.0, 200.0, 300.0], tight)
    c_fit = max(row.ratio for row in cal.rows)
    rep = r_scan(SPEC, 150.0, list(range(1, 51)), tight)
    assert rep.max_abs_E <= c_fit * 150.0**1.2


def test_scan_determinism():
    a = error_scan(SPEC, 1, [8.0, 11.0], QUAD)
    b = error_scan(SPEC, 1, [8.0, 11.0], QUAD)
    assert a == b


def test_threads_env(monkeypatch):
    monkeypatch.delenv("DETCOUNT_THREADS", raising=False)
    assert threads_from_env() == 1
    monkeypatch.setenv("DETCOUNT_THREADS", "4")
    assert threads_from_env() == 4
    monkeypatch.setenv("DETCOUNT_THREADS", "zero")
    with pytest.raises(ValidationError):
        threads_from_env()


def test_parallel_rows_match_sequential(monkeypatch):
    monkeypatch.setenv("DETCOUNT_THREADS", "1")
    seq = error_scan(SPEC, 1, [8.0, 10.0, 12.0], QUAD)
    monkeypatch.setenv("DETCOUNT_THREADS", "2")
    par = error_scan(SPEC, 1, [8.0, 10.0, 12.0], QUAD)
    assert par == seq
