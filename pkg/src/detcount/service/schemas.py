"""Pydantic request/response models for the HTTP service.

Every numeric endpoint accepts the weight and quadrature configuration inline
so a request is a self-contained, reproducible experiment description.
NaN never crosses the wire: optional statistics are null when undefined.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class WeightModel(BaseModel):
    kind: Literal["canonical-bump"] = "canonical-bump"
    amplitude: float = 1.0


class QuadratureModel(BaseModel):
    panels_per_axis: int = Field(default=4, ge=1)
    nodes_per_panel: int = Field(default=12, ge=4)
    abs_tolerance: float = Field(default=1e-10, gt=0.0)
    max_depth: int = Field(default=8, ge=1)


class ComputeRequest(BaseModel):
    weight: WeightModel = WeightModel()
    quadrature: QuadratureModel = QuadratureModel()


class ErrorBody(BaseModel):
    code: Literal["validation", "non-convergence", "internal"]
    message: str


# -- counting ---------------------------------------------------------------

class CountRequest(ComputeRequest):
    X: float
    r: int
    naive: bool = False


class CountResponse(BaseModel):
    X: float
    r: int
    weighted_sum: float
    solution_count: int
    elapsed_ms: float


# -- main term --------------------------------------------------------------

class MainTermRequest(ComputeRequest):
    X: float
    r: int
    truncate: Optional[int] = Field(default=None, ge=1)


class MainTermResponse(BaseModel):
    X: float
    r: int
    alpha: float
    I_alpha: float
    closed_form: float
    truncated_value: Optional[float] = None
    tail_bound: Optional[float] = None
    k_truncation: Optional[int] = None


# -- scans ------------------------------------------------------------------

class ScanRowModel(BaseModel):
    X: float
    r: int
    S: float
    M: float
    E: float
    abs_E: float
    ratio: float


class ScanResponse(BaseModel):
    rows: list[ScanRowModel]
    fitted_slope: Optional[float] = None
    fit_intercept: Optional[float] = None
    max_abs_E: Optional[float] = None


class ErrorScanRequest(ComputeRequest):
    r: int
    X_list: list[float]


class RScanRequest(ComputeRequest):
    X: float
    r_list: list[int]


# -- mod p ------------------------------------------------------------------

class ModPRequest(ComputeRequest):
    p: int
    X: Optional[float] = None  # default: ceil(2 sqrt(p))
    g_scale: float = 1.0


class ModPScanRequest(ComputeRequest):
    primes: list[int]
    x_rule: str = "2sqrt"
    g_scale: float = 1.0


class ModPRowModel(BaseModel):
    p: int
    X: float
    S: float
    M: float
    E: float
    E_over_X2: float


class ModPResponse(BaseModel):
    rows: list[ModPRowModel]


# -- exponential sums -------------------------------------------------------

class KloostermanRequest(BaseModel):
    m: int
    n: int
    c: int


class KloostermanRow(BaseModel):
    m: int
    n: int
    c: int
    S: float
    weil_gap: float
    degenerate: bool


class WeilScanRequest(BaseModel):
    c_max: int = Field(ge=1)
    m_max: int = Field(default=5, ge=1)
    n_max: int = Field(default=5, ge=1)


class WeilScanResponse(BaseModel):
    rows: list[KloostermanRow]


class PoissonRequest(ComputeRequest):
    scale: float
    q: Optional[int] = None
    a: Optional[int] = None


class PoissonResponse(BaseModel):
    kind: Literal["plain", "twisted"]
    scale: float
    q: Optional[int] = None
    a: Optional[int] = None
    residual: float


# -- spectral ---------------------------------------------------------------

class OscParamsModel(BaseModel):
    m: int = 1
    n: int = 1
    r: int = 1
    l: int = Field(default=1, ge=1)
    X: float = 100.0


class BesselDecayRequest(ComputeRequest):
    params: OscParamsModel = OscParamsModel()
    etas: list[float]


class BesselDecayRow(BaseModel):
    eta: float
    fcheck_re: float
    fcheck_im: float
    fcheck_abs: float
    fcheck_env: float
    fddot_re: float
    fddot_im: float
    fddot_abs: float
    fddot_env: float


class BesselDecayResponse(BaseModel):
    rows: list[BesselDecayRow]


class BesselIdentityRequest(ComputeRequest):
    x: float
    y: float
    k_max: int = Field(default=80, ge=40)


class BesselIdentityResponse(BaseModel):
    x: float
    y: float
    k_max: int
    residual_a: float
    residual_b: float


class CancellationRequest(ComputeRequest):
    params: OscParamsModel = OscParamsModel()
    m_max: int = Field(default=5, ge=1)
    n_max: int = Field(default=5, ge=1)
    c_max: Optional[int] = None  # default: past the support window


class CancellationRow(BaseModel):
    m: int
    n: int
    signed_re: float
    signed_im: float
    signed_abs: float
    companion: float
    ratio: Optional[float] = None  # null when the companion sum is zero


class CancellationResponse(BaseModel):
    rows: list[CancellationRow]


class HealthResponse(BaseModel):
    status: Literal["ok"]
    version: str
