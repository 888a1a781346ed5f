"""Scan harnesses: error-term scaling in X, shift scans in r, and the fit
diagnostics reported with them.

Rows are computed independently and collected in input order, so output is
deterministic; DETCOUNT_THREADS > 1 distributes rows over worker processes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .counting import CountQuery, count_fast
from .errors import InvalidR, ValidationError
from .mainterm import main_term_closed
from .weights import QuadratureSpec, WeightSpec

RATIO_EXPONENT = 1.2
FIT_FLOOR = 1e-9


@dataclass(frozen=True)
class ScalingRow:
    X: float
    r: int
    S: float
    M: float
    E: float
    abs_E: float
    ratio: float  # |E| / X^1.2


@dataclass(frozen=True)
class ScalingReport:
    rows: tuple[ScalingRow, ...]
    fitted_slope: float  # NaN when fewer than two usable rows
    fit_intercept: float

    @property
    def max_abs_E(self) -> float:
        return max((row.abs_E for row in self.rows), default=float("nan"))


def threads_from_env() -> int:
    raw = os.environ.get("DETCOUNT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValidationError(f"DETCOUNT_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def _scan_row(args: tuple[WeightSpec, float, int, QuadratureSpec]) -> ScalingRow:
    spec, X, r, quad = args
    q = CountQuery(X, r)
    S = count_fast(spec, q).weighted_sum
    M = main_term_closed(spec, q, quad).closed_form
    E = S - M
    return ScalingRow(X, r, S, M, E, abs(E), abs(E) / X**RATIO_EXPONENT)


def _map_rows(tasks: list[tuple]) -> list[ScalingRow]:
    threads = threads_from_env()
    if threads == 1 or len(tasks) <= 1:
        return [_scan_row(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=min(threads, len(tasks))) as pool:
        return list(pool.map(_scan_row, tasks))


def _fit(rows: list[ScalingRow]) -> tuple[float, float]:
    """Least squares of log|E| against log X over rows with |E| above the floor."""
    pts = [(math.log(row.X), math.log(row.abs_E)) for row in rows if row.abs_E > FIT_FLOOR]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        return float("nan"), float("nan")
    xs = np.array([x for x, _ in pts])
    ys = np.array([y for _, y in pts])
    design = np.vstack([xs, np.ones_like(xs)]).T
    slope, intercept = np.linalg.lstsq(design, ys, rcond=None)[0]
    return float(slope), float(intercept)


def error_scan(
    spec: WeightSpec, r: int, X_list: list[float], quad: QuadratureSpec
) -> ScalingReport:
    """One row per X (ascending) at fixed r, with the log-log slope fit."""
    if not X_list:
        raise ValidationError("X_list must be nonempty")
    if any(b <= a for a, b in zip(X_list, X_list[1:])):
        raise ValidationError("X_list must be strictly ascending")
    if r == 0:
        raise InvalidR("r must be nonzero")
    if not abs(r) < 3.0 * min(X_list) ** 2:
        raise InvalidR(f"|r| must be < 3*min(X)^2 = {3.0 * min(X_list)**2}")
    rows = _map_rows([(spec, float(X), r, quad) for X in X_list])
    slope, intercept = _fit(rows)
    return ScalingReport(tuple(rows), slope, intercept)


def r_scan(
    spec: WeightSpec, X: float, r_list: list[int], quad: QuadratureSpec
) -> ScalingReport:
    """One row per distinct r at fixed X.  The slope fit is degenerate here
    (a single X), so it reports NaN; max_abs_E is the headline statistic."""
    if not r_list:
        raise ValidationError("r_list must be nonempty")
    seen: list[int] = []
    for r in r_list:
        if r == 0:
            raise InvalidR("r = 0 is not admissible")
        if r not in seen:
            seen.append(r)
    for r in seen:
        if not abs(r) < 3.0 * X * X:
            raise InvalidR(f"|r| = {abs(r)} must be < 3*X^2 = {3.0 * X * X}")
    rows = _map_rows([(spec, float(X), r, quad) for r in seen])
    slope, intercept = _fit(rows)
    return ScalingReport(tuple(rows), slope, intercept)
