"""FastAPI service wrapping the core package.

Each endpoint is a pure computation: request in, rows out, no state.  Errors
map to a machine-readable body: precondition violations come back as 422 with
code "validation", exhausted panel refinement as 500 with "non-convergence".
"""

from __future__ import annotations

import math

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from ..counting import CountQuery, count_fast, count_naive
from ..errors import QuadratureNotConverged, ValidationError
from ..experiments import error_scan, r_scan
from ..expsums import (
    KloostermanQuery,
    kloosterman,
    twisted_poisson_residual,
    weil_gap,
)
from ..mainterm import main_term_closed, main_term_truncated
from ..modp import ModPQuery, count_modp, modp_error_scan, modp_main
from ..spectral import (
    OscWeightParams,
    bessel_identity_residuals,
    f_check,
    f_ddot,
    weighted_kloosterman_sum,
)
from ..weights import QuadratureSpec, WeightSpec, poisson_check
from . import schemas as s


def _weight(model: s.WeightModel) -> WeightSpec:
    return WeightSpec(kind=model.kind, amplitude=model.amplitude)


def _quad(model: s.QuadratureModel) -> QuadratureSpec:
    return QuadratureSpec(
        panels_per_axis=model.panels_per_axis,
        nodes_per_panel=model.nodes_per_panel,
        abs_tolerance=model.abs_tolerance,
        max_depth=model.max_depth,
    )


def _optional(x: float) -> float | None:
    return None if math.isnan(x) else x


def _osc_params(model: s.OscParamsModel, weight: WeightSpec) -> OscWeightParams:
    if model.r % model.l:
        raise ValidationError(f"l = {model.l} must divide r = {model.r}")
    return OscWeightParams(
        m=model.m,
        n=model.n,
        r1=model.r // model.l,
        l=model.l,
        X=model.X,
        weight=weight,
    )


def parse_x_rule(rule: str, g_scale: float):
    """Window rules of the form '<coef>sqrt', e.g. '2sqrt': X = ceil(coef * g * sqrt(p))."""
    if not rule.endswith("sqrt"):
        raise ValidationError(f"unknown x rule {rule!r}; expected '<coef>sqrt'")
    head = rule[: -len("sqrt")] or "1"
    try:
        coef = float(head)
    except ValueError as exc:
        raise ValidationError(f"bad coefficient in x rule {rule!r}") from exc
    if coef <= 0.0:
        raise ValidationError("x rule coefficient must be positive")
    return lambda p: float(math.ceil(coef * g_scale * math.sqrt(p)))


def create_app() -> FastAPI:
    app = FastAPI(title="detcount", version=__version__)

    @app.exception_handler(ValidationError)
    async def _validation(request: Request, exc: ValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422,
            content=s.ErrorBody(code="validation", message=str(exc)).model_dump(),
        )

    @app.exception_handler(QuadratureNotConverged)
    async def _nonconv(request: Request, exc: QuadratureNotConverged) -> JSONResponse:
        return JSONResponse(
            status_code=500,
            content=s.ErrorBody(code="non-convergence", message=str(exc)).model_dump(),
        )

    @app.get("/health", response_model=s.HealthResponse)
    def health() -> s.HealthResponse:
        return s.HealthResponse(status="ok", version=__version__)

    @app.post("/count", response_model=s.CountResponse)
    def count(req: s.CountRequest) -> s.CountResponse:
        q = CountQuery(req.X, req.r)
        runner = count_naive if req.naive else count_fast
        res = runner(_weight(req.weight), q)
        return s.CountResponse(
            X=req.X,
            r=req.r,
            weighted_sum=res.weighted_sum,
            solution_count=res.solution_count,
            elapsed_ms=res.elapsed * 1000.0,
        )

    @app.post("/mainterm", response_model=s.MainTermResponse)
    def mainterm(req: s.MainTermRequest) -> s.MainTermResponse:
        q = CountQuery(req.X, req.r)
        spec, quad = _weight(req.weight), _quad(req.quadrature)
        if req.truncate is None:
            b = main_term_closed(spec, q, quad)
        else:
            b = main_term_truncated(spec, q, req.truncate, quad)
        return s.MainTermResponse(
            X=req.X,
            r=req.r,
            alpha=b.alpha,
            I_alpha=b.I_alpha,
            closed_form=b.closed_form,
            truncated_value=b.truncated_value,
            tail_bound=b.tail_bound,
            k_truncation=b.k_truncation,
        )

    def _scan_response(report) -> s.ScanResponse:
        return s.ScanResponse(
            rows=[s.ScanRowModel(**row.__dict__) for row in report.rows],
            fitted_slope=_optional(report.fitted_slope),
            fit_intercept=_optional(report.fit_intercept),
            max_abs_E=_optional(report.max_abs_E),
        )

    @app.post("/error-scan", response_model=s.ScanResponse)
    def error_scan_ep(req: s.ErrorScanRequest) -> s.ScanResponse:
        report = error_scan(_weight(req.weight), req.r, req.X_list, _quad(req.quadrature))
        return _scan_response(report)

    @app.post("/r-scan", response_model=s.ScanResponse)
    def r_scan_ep(req: s.RScanRequest) -> s.ScanResponse:
        report = r_scan(_weight(req.weight), req.X, req.r_list, _quad(req.quadrature))
        return _scan_response(report)

    @app.post("/modp", response_model=s.ModPResponse)
    def modp_ep(req: s.ModPRequest) -> s.ModPResponse:
        spec, quad = _weight(req.weight), _quad(req.quadrature)
        X = req.X if req.X is not None else parse_x_rule("2sqrt", req.g_scale)(req.p)
        q = ModPQuery(req.p, X, req.g_scale)
        S = count_modp(spec, q).weighted_sum
        M = modp_main(spec, q, quad)
        row = s.ModPRowModel(p=req.p, X=X, S=S, M=M, E=S - M, E_over_X2=(S - M) / (X * X))
        return s.ModPResponse(rows=[row])

    @app.post("/modp-scan", response_model=s.ModPResponse)
    def modp_scan_ep(req: s.ModPScanRequest) -> s.ModPResponse:
        spec, quad = _weight(req.weight), _quad(req.quadrature)
        rule = parse_x_rule(req.x_rule, req.g_scale)
        rows = modp_error_scan(spec, req.primes, rule, quad, req.g_scale)
        return s.ModPResponse(rows=[s.ModPRowModel(**row.__dict__) for row in rows])

    def _kloosterman_row(m: int, n: int, c: int) -> s.KloostermanRow:
        q = KloostermanQuery(m, n, c)
        gap = weil_gap(q)
        return s.KloostermanRow(
            m=m, n=n, c=c, S=kloosterman(q), weil_gap=gap.value, degenerate=gap.degenerate
        )

    @app.post("/kloosterman", response_model=s.KloostermanRow)
    def kloosterman_ep(req: s.KloostermanRequest) -> s.KloostermanRow:
        return _kloosterman_row(req.m, req.n, req.c)

    @app.post("/weil-scan", response_model=s.WeilScanResponse)
    def weil_scan_ep(req: s.WeilScanRequest) -> s.WeilScanResponse:
        rows = [
            _kloosterman_row(m, n, c)
            for c in range(1, req.c_max + 1)
            for m in range(1, req.m_max + 1)
            for n in range(1, req.n_max + 1)
        ]
        return s.WeilScanResponse(rows=rows)

    @app.post("/poisson-check", response_model=s.PoissonResponse)
    def poisson_ep(req: s.PoissonRequest) -> s.PoissonResponse:
        spec, quad = _weight(req.weight), _quad(req.quadrature)
        if (req.q is None) != (req.a is None):
            raise ValidationError("q and a must be given together")
        if req.q is None:
            residual = poisson_check(spec, req.scale, quad)
            return s.PoissonResponse(kind="plain", scale=req.scale, residual=residual)
        residual = twisted_poisson_residual(spec, req.a, req.q, req.scale, quad)
        return s.PoissonResponse(
            kind="twisted", scale=req.scale, q=req.q, a=req.a, residual=residual
        )

    @app.post("/bessel-decay", response_model=s.BesselDecayResponse)
    def bessel_decay_ep(req: s.BesselDecayRequest) -> s.BesselDecayResponse:
        spec, quad = _weight(req.weight), _quad(req.quadrature)
        params = _osc_params(req.params, spec)
        rows = []
        for eta in req.etas:
            fc = f_check(params, eta, quad)
            fd = f_ddot(params, eta, quad)
            boost = math.exp(math.pi * abs(eta))
            rows.append(
                s.BesselDecayRow(
                    eta=eta,
                    fcheck_re=fc.real,
                    fcheck_im=fc.imag,
                    fcheck_abs=abs(fc),
                    fcheck_env=abs(fc) * boost * abs(eta) ** 2,
                    fddot_re=fd.real,
                    fddot_im=fd.imag,
                    fddot_abs=abs(fd),
                    fddot_env=abs(fd) * boost * abs(eta) ** 2.5,
                )
            )
        return s.BesselDecayResponse(rows=rows)

    @app.post("/bessel-identity", response_model=s.BesselIdentityResponse)
    def bessel_identity_ep(req: s.BesselIdentityRequest) -> s.BesselIdentityResponse:
        ra, rb = bessel_identity_residuals(req.x, req.y, req.k_max, _quad(req.quadrature))
        return s.BesselIdentityResponse(
            x=req.x, y=req.y, k_max=req.k_max, residual_a=ra, residual_b=rb
        )

    @app.post("/cancellation", response_model=s.CancellationResponse)
    def cancellation_ep(req: s.CancellationRequest) -> s.CancellationResponse:
        spec = _weight(req.weight)
        base = req.params
        c_max = req.c_max
        if c_max is None:
            c_max = math.ceil(2.0 * base.X / base.l) + 1
        rows = []
        for m in range(-req.m_max, req.m_max + 1):
            if m == 0:
                continue
            for n in range(-req.n_max, req.n_max + 1):
                if n == 0:
                    continue
                params = _osc_params(
                    s.OscParamsModel(m=m, n=n, r=base.r, l=base.l, X=base.X), spec
                )
                signed, companion = weighted_kloosterman_sum(params, c_max)
                rows.append(
                    s.CancellationRow(
                        m=m,
                        n=n,
                        signed_re=signed.real,
                        signed_im=signed.imag,
                        signed_abs=abs(signed),
                        companion=companion,
                        ratio=abs(signed) / companion if companion > 0.0 else None,
                    )
                )
        return s.CancellationResponse(rows=rows)

    return app
