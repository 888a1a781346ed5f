"""Smoothed counting on determinant surfaces with exponential-sum and
Bessel-transform diagnostics: a library, an HTTP service, and a batch CLI."""

from .counting import CountQuery, CountResult, count_fast, count_naive, enumerate_range
from .errors import (
    CompositeModulus,
    DetcountError,
    EmptyRange,
    EvenModulus,
    InvalidR,
    NotInvertible,
    OutOfValidatedRange,
    PoleAtNonpositiveInteger,
    QuadratureNotConverged,
    ValidationError,
)
from .experiments import ScalingReport, ScalingRow, error_scan, r_scan
from .mainterm import (
    RAMANUJAN_EXPONENT_THETA,
    ZETA2_INV,
    MainTermBreakdown,
    error_term,
    k_constant,
    main_term_closed,
    main_term_truncated,
    reduced_integral,
)
from .modp import ModPQuery, ModPScanRow, count_modp, modp_error_scan, modp_main
from .weights import QuadratureSpec, WeightSpec, eval_weight, fourier, integral, poisson_check

__version__ = "0.1.0"

__all__ = [
    "CompositeModulus",
    "CountQuery",
    "CountResult",
    "DetcountError",
    "EmptyRange",
    "EvenModulus",
    "InvalidR",
    "MainTermBreakdown",
    "ModPQuery",
    "ModPScanRow",
    "NotInvertible",
    "OutOfValidatedRange",
    "PoleAtNonpositiveInteger",
    "QuadratureNotConverged",
    "QuadratureSpec",
    "RAMANUJAN_EXPONENT_THETA",
    "ScalingReport",
    "ScalingRow",
    "ValidationError",
    "WeightSpec",
    "ZETA2_INV",
    "count_fast",
    "count_modp",
    "count_naive",
    "enumerate_range",
    "error_scan",
    "error_term",
    "eval_weight",
    "fourier",
    "integral",
    "k_constant",
    "main_term_closed",
    "main_term_truncated",
    "modp_error_scan",
    "modp_main",
    "poisson_check",
    "r_scan",
    "reduced_integral",
    "__version__",
]
