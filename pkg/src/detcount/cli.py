"""Batch CLI: a thin client over the HTTP service.

By default requests are dispatched to an in-process instance of the service
(no server needed); --server or DETCOUNT_SERVER points at a remote one
instead.  Every subcommand echoes its resolved request as a '# config: {...}'
comment and then emits deterministic CSV on stdout: fixed column order,
17-significant-digit floats, LF line endings, 'n/a' for undefined fields.

Exit codes: 0 success, 2 validation error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import sys
from typing import Any

import httpx

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NOT_CONVERGED = 3
EXIT_INTERNAL = 1


def _fmt(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _emit_csv(columns: list[str], rows: list[dict], footer: str | None = None) -> None:
    out = sys.stdout
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(_fmt(row.get(col)) for col in columns) + "\n")
    if footer:
        out.write(footer + "\n")


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    return cfg


def _compute_payload(args: argparse.Namespace, cfg: dict) -> dict:
    """weight/quadrature blocks: config file first, then flag overrides."""
    weight = dict(cfg.get("weight", {}))
    quadrature = dict(cfg.get("quadrature", {}))
    if args.amplitude is not None:
        weight["amplitude"] = args.amplitude
    if args.tolerance is not None:
        quadrature["abs_tolerance"] = args.tolerance
    if args.panels is not None:
        quadrature["panels_per_axis"] = args.panels
    if args.nodes is not None:
        quadrature["nodes_per_panel"] = args.nodes
    if args.depth is not None:
        quadrature["max_depth"] = args.depth
    payload: dict = {}
    if weight:
        payload["weight"] = weight
    if quadrature:
        payload["quadrature"] = quadrature
    return payload


def _ints(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


class ServiceClient:
    """POSTs to a remote server when given a base URL, otherwise runs the
    ASGI app in-process through httpx's ASGI transport."""

    def __init__(self, server: str | None):
        self.server = server

    def post(self, path: str, payload: dict) -> httpx.Response:
        if self.server:
            with httpx.Client(base_url=self.server, timeout=None) as client:
                return client.post(path, json=payload)
        from .service import create_app

        async def _go() -> httpx.Response:
            transport = httpx.ASGITransport(app=create_app())
            async with httpx.AsyncClient(
                transport=transport, base_url="http://detcount.internal", timeout=None
            ) as client:
                return await client.post(path, json=payload)

        return asyncio.run(_go())


def _call(client: ServiceClient, path: str, payload: dict) -> dict:
    print(
        "# config: " + json.dumps({"endpoint": path, **payload}, sort_keys=True, separators=(",", ":"))
    )
    try:
        resp = client.post(path, payload)
    except httpx.HTTPError as exc:
        print(f"error: transport failure: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INTERNAL)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        body = {}
    code = body.get("code")
    message = body.get("message") or json.dumps(body.get("detail", body))
    print(f"error: {message}", file=sys.stderr)
    if resp.status_code == 422 or code == "validation":
        raise SystemExit(EXIT_VALIDATION)
    if code == "non-convergence":
        raise SystemExit(EXIT_NOT_CONVERGED)
    raise SystemExit(EXIT_INTERNAL)


def _scan_footer(data: dict) -> str:
    return (
        f"# fit: slope={_fmt(data.get('fitted_slope'))}"
        f",intercept={_fmt(data.get('fit_intercept'))}"
        f",max_abs_E={_fmt(data.get('max_abs_E'))}"
    )


SCAN_COLUMNS = ["X", "r", "S", "M", "E", "abs_E", "ratio"]
MODP_COLUMNS = ["p", "X", "S", "M", "E", "E_over_X2"]
KLOOSTERMAN_COLUMNS = ["m", "n", "c", "S", "weil_gap"]
DECAY_COLUMNS = [
    "eta",
    "fcheck_re",
    "fcheck_im",
    "fcheck_abs",
    "fcheck_env",
    "fddot_re",
    "fddot_im",
    "fddot_abs",
    "fddot_env",
]
CANCEL_COLUMNS = ["m", "n", "signed_re", "signed_im", "signed_abs", "companion", "ratio"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detcount",
        description="Smoothed determinant-surface counting experiments (CSV on stdout).",
    )
    parser.add_argument("--config", help="JSON config file: {weight, quadrature, ...}")
    parser.add_argument("--server", default=os.environ.get("DETCOUNT_SERVER"),
                        help="base URL of a running service; default is in-process")
    parser.add_argument("--amplitude", type=float, help="weight amplitude override")
    parser.add_argument("--tolerance", type=float, help="quadrature absolute tolerance")
    parser.add_argument("--panels", type=int, help="quadrature panels per axis")
    parser.add_argument("--nodes", type=int, help="quadrature nodes per panel")
    parser.add_argument("--depth", type=int, help="quadrature refinement depth")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="weighted solution count of a*d - b*c = r")
    p.add_argument("--X", type=float, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--naive", action="store_true", help="use the cubic reference loop")

    p = sub.add_parser("mainterm", help="closed-form (and optionally truncated) main term")
    p.add_argument("--X", type=float, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--truncate", type=int, help="truncation K of the literal double sum")

    p = sub.add_parser("error-scan", help="error-term scaling across a window list")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--xs", type=_floats, required=True, metavar="X1,X2,...")

    p = sub.add_parser("r-scan", help="error terms across shifts at fixed X")
    p.add_argument("--X", type=float, required=True)
    p.add_argument("--rs", type=_ints, required=True, metavar="r1,r2,...")

    p = sub.add_parser("modp", help="smoothed count of a*d - b*c = 1 (mod p)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--X", type=float, help="window; default ceil(2 sqrt(p))")
    p.add_argument("--gscale", type=float, default=1.0)

    p = sub.add_parser("modp-scan", help="mod-p error scan over primes")
    p.add_argument("--primes", type=_ints, required=True, metavar="p1,p2,...")
    p.add_argument("--xrule", default="2sqrt")
    p.add_argument("--gscale", type=float, default=1.0)

    p = sub.add_parser("kloosterman", help="exact Kloosterman sum and Weil gap")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--c", type=int, required=True)

    p = sub.add_parser("weil-scan", help="Weil gaps over a modulus/frequency grid")
    p.add_argument("--cmax", type=int, required=True)
    p.add_argument("--mmax", type=int, default=5)
    p.add_argument("--nmax", type=int, default=5)

    p = sub.add_parser("poisson-check", help="summation-identity residual (plain or twisted)")
    p.add_argument("--scale", type=float, required=True)
    p.add_argument("--q", type=int, help="modulus of the inverse twist")
    p.add_argument("--a", type=int, help="numerator of the inverse twist")

    p = sub.add_parser("bessel-decay", help="transform decay envelopes over an eta grid")
    p.add_argument("--X", type=float, default=100.0)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--etas", type=_floats, required=True, metavar="e1,e2,...")

    p = sub.add_parser("bessel-identity", help="even-order J-sum identity residuals")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    p.add_argument("--kmax", type=int, default=80)

    p = sub.add_parser("cancellation", help="signed vs absolute weighted Kloosterman sums")
    p.add_argument("--X", type=float, default=100.0)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--mmax", type=int, default=5)
    p.add_argument("--nmax", type=int, default=5)
    p.add_argument("--cmax", type=int)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK

    try:
        cfg = _load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    base = _compute_payload(args, cfg)
    client = ServiceClient(args.server)

    if args.command == "count":
        data = _call(client, "/count", {**base, "X": args.X, "r": args.r, "naive": args.naive})
        _emit_csv(
            ["X", "r", "weighted_sum", "solution_count", "elapsed_ms"], [data]
        )
    elif args.command == "mainterm":
        payload = {**base, "X": args.X, "r": args.r}
        if args.truncate is not None:
            payload["truncate"] = args.truncate
        data = _call(client, "/mainterm", payload)
        _emit_csv(
            ["X", "r", "alpha", "I_alpha", "closed_form", "truncated_value", "tail_bound"],
            [data],
        )
    elif args.command == "error-scan":
        data = _call(client, "/error-scan", {**base, "r": args.r, "X_list": args.xs})
        _emit_csv(SCAN_COLUMNS, data["rows"], footer=_scan_footer(data))
    elif args.command == "r-scan":
        data = _call(client, "/r-scan", {**base, "X": args.X, "r_list": args.rs})
        _emit_csv(SCAN_COLUMNS, data["rows"], footer=_scan_footer(data))
    elif args.command == "modp":
        payload = {**base, "p": args.p, "g_scale": args.gscale}
        if args.X is not None:
            payload["X"] = args.X
        data = _call(client, "/modp", payload)
        _emit_csv(MODP_COLUMNS, data["rows"])
    elif args.command == "modp-scan":
        data = _call(
            client,
            "/modp-scan",
            {**base, "primes": args.primes, "x_rule": args.xrule, "g_scale": args.gscale},
        )
        _emit_csv(MODP_COLUMNS, data["rows"])
    elif args.command == "kloosterman":
        data = _call(client, "/kloosterman", {"m": args.m, "n": args.n, "c": args.c})
        _emit_csv(KLOOSTERMAN_COLUMNS, [data])
    elif args.command == "weil-scan":
        data = _call(
            client,
            "/weil-scan",
            {"c_max": args.cmax, "m_max": args.mmax, "n_max": args.nmax},
        )
        _emit_csv(KLOOSTERMAN_COLUMNS, data["rows"])
    elif args.command == "poisson-check":
        payload = {**base, "scale": args.scale}
        if args.q is not None:
            payload["q"] = args.q
        if args.a is not None:
            payload["a"] = args.a
        data = _call(client, "/poisson-check", payload)
        _emit_csv(["kind", "scale", "q", "a", "residual"], [data])
    elif args.command == "bessel-decay":
        payload = {
            **base,
            "params": {"m": args.m, "n": args.n, "r": args.r, "l": args.l, "X": args.X},
            "etas": args.etas,
        }
        data = _call(client, "/bessel-decay", payload)
        _emit_csv(DECAY_COLUMNS, data["rows"])
    elif args.command == "bessel-identity":
        data = _call(
            client, "/bessel-identity", {**base, "x": args.x, "y": args.y, "k_max": args.kmax}
        )
        _emit_csv(["x", "y", "k_max", "residual_a", "residual_b"], [data])
    elif args.command == "cancellation":
        payload = {
            **base,
            "params": {"m": 1, "n": 1, "r": args.r, "l": args.l, "X": args.X},
            "m_max": args.mmax,
            "n_max": args.nmax,
        }
        if args.cmax is not None:
            payload["c_max"] = args.cmax
        data = _call(client, "/cancellation", payload)
        _emit_csv(CANCEL_COLUMNS, data["rows"])
    else:  # pragma: no cover - argparse enforces the choice
        parser.error(f"unknown command {args.command}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
