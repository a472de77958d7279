"""Command-line front end.

The CLI is a thin client of the HTTP service: every subcommand builds a
JSON request, sends it to the service, and formats the response.  By
default the service app runs in-process; ``--server`` (or the
``ADAPTIVE_SPRT_SERVER`` environment variable) points the same commands
at a remote instance instead.  ``serve`` starts the service.

Subcommands: moments, n1star, thresholds, simulate, classical, table,
serve.  Population pairs are given with one of::

    --normal THETA0 THETA1 [--variances V0 V1]
    --poisson RATE0 RATE1
    --al M0 SCALE0 ASYM0 M1 SCALE1 ASYM1
"""

from __future__ import annotations

import argparse
import asyncio
import os
import sys
from pathlib import Path

import httpx

SERVER_ENV_VAR = "ADAPTIVE_SPRT_SERVER"


class ServiceError(RuntimeError):
    pass


class _InProcessClient:
    """One-shot sync requests against the ASGI app, no socket involved."""

    def __init__(self):
        from .service import app

        self._app = app

    def post(self, path: str, json: dict) -> httpx.Response:
        async def go():
            transport = httpx.ASGITransport(app=self._app)
            async with httpx.AsyncClient(
                transport=transport, base_url="http://adaptive-sprt.internal", timeout=None
            ) as client:
                return await client.post(path, json=json)

        return asyncio.run(go())

    def __enter__(self):
        return self

    def __exit__(self, *exc_info):
        return False


def _make_client(server: str | None):
    server = server or os.environ.get(SERVER_ENV_VAR)
    if server:
        return httpx.Client(base_url=server, timeout=None)
    return _InProcessClient()


def _post(client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail")
        except (ValueError, AttributeError):
            detail = response.text
        raise ServiceError(f"{path} failed ({response.status_code}): {detail}")
    return response.json()


def _add_pair_flags(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument(
        "--normal", nargs=2, type=float, metavar=("THETA0", "THETA1"),
        help="Normal pair with the given means",
    )
    group.add_argument(
        "--poisson", nargs=2, type=float, metavar=("RATE0", "RATE1"),
        help="Poisson pair with the given rates",
    )
    group.add_argument(
        "--al", nargs=6, type=float,
        metavar=("M0", "SCALE0", "ASYM0", "M1", "SCALE1", "ASYM1"),
        help="Asymmetric Laplace pair with the given parameter triples",
    )
    parser.add_argument(
        "--variances", nargs=2, type=float, default=(1.0, 1.0), metavar=("V0", "V1"),
        help="variances for --normal (default: 1 1)",
    )


def _pair_payload(args) -> dict:
    if args.normal is not None:
        v0, v1 = args.variances
        return {
            "f0": {"family": "normal", "mean": args.normal[0], "variance": v0},
            "f1": {"family": "normal", "mean": args.normal[1], "variance": v1},
        }
    if args.poisson is not None:
        return {
            "f0": {"family": "poisson", "rate": args.poisson[0]},
            "f1": {"family": "poisson", "rate": args.poisson[1]},
        }
    m0, s0, k0, m1, s1, k1 = args.al
    return {
        "f0": {"family": "asymmetric_laplace", "location": m0, "scale": s0, "asymmetry": k0},
        "f1": {"family": "asymmetric_laplace", "location": m1, "scale": s1, "asymmetry": k1},
    }


def _g(x: float) -> str:
    return format(x, ".10g")


def _cmd_moments(client, args) -> int:
    data = _post(client, "/moments", {
        "pair": _pair_payload(args), "method": args.method, "tol": args.tol,
    })
    print(f"method:   {data['method']}")
    for key in ("eta_x", "sigma2_x", "eta_y", "sigma2_y"):
        print(f"{key + ':':<10}{_g(data[key])}")
    return 0


def _cmd_n1star(client, args) -> int:
    data = _post(client, "/n1star", {
        "pair": _pair_payload(args), "eps": args.eps, "tol": args.tol,
    })
    print(f"closed form: {_g(data['closed_form'])}")
    print(f"series:      {_g(data['series'])}")
    return 0


def _cmd_thresholds(client, args) -> int:
    beta = args.beta if args.beta is not None else args.alpha
    data = _post(client, "/thresholds", {"alpha": args.alpha, "beta": beta})
    print(f"a: {_g(data['a'])}")
    print(f"b: {_g(data['b'])}")
    return 0


def _print_summary(row: dict):
    print(f"label:        {row['label']}")
    print(f"procedure:    {row['procedure']}  (truth: {row['truth']})")
    print(f"alpha, beta:  {_g(row['alpha'])}, {_g(row['beta'])}")
    print(f"replications: {row['replications']}  (master seed: {row['master_seed']})")
    print(f"PCS:          {row['pcs']:.3f} (se {row['se_pcs']:.4f})")
    print(f"E(N1):        {row['mean_n_inferior']:.3f} (se {row['se_n_inferior']:.3f})")
    print(f"ASN:          {row['asn']:.3f} (se {row['se_asn']:.3f})")
    print(f"total draws:  {row['mean_total_draws']:.3f}")
    print(f"N1* closed:   {_g(row['n1_star_closed'])}")
    print(f"N1* series:   {_g(row['n1_star_series'])}")
    print(f"Wald ASN K0:  {_g(row['asn_wald_k0'])}")
    return 0


def _cmd_simulate(client, args, procedure: str | None = None) -> int:
    payload = {
        "pair": _pair_payload(args),
        "alpha": args.alpha,
        "replications": args.replications,
        "seed": args.seed,
        "procedure": procedure or args.procedure,
        "truth": args.truth,
        "cap": args.cap,
    }
    if args.beta is not None:
        payload["beta"] = args.beta
    if args.workers is not None:
        payload["workers"] = args.workers
    if args.label:
        payload["label"] = args.label
    return _print_summary(_post(client, "/simulate", payload))


def _cmd_table(client, args) -> int:
    payload = {}
    if args.preset:
        payload["preset"] = args.preset
    else:
        payload["config"] = Path(args.config).read_text()
    for key in ("seed", "replications", "format", "workers"):
        value = getattr(args, key)
        if value is not None:
            payload[key] = value
    data = _post(client, "/table", payload)
    out = Path(args.output) if args.output else Path(data["suggested_path"])
    out.write_text(data["content"])
    print(f"wrote {len(data['rows'])} rows -> {out}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("adaptive_sprt.service:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="adaptive-sprt",
        description="Adaptive sequential hypothesis-testing simulator and analytics.",
    )
    parser.add_argument("--server", help=f"service URL (default: in-process; env {SERVER_ENV_VAR})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="log-likelihood-ratio moments of a pair")
    _add_pair_flags(p)
    p.add_argument("--method", choices=("auto", "analytic", "numeric"), default="auto")
    p.add_argument("--tol", type=float, default=1e-9, help="numeric-moments tolerance")
    p.set_defaults(handler=_cmd_moments)

    p = sub.add_parser("n1star", help="limiting expected inferior allocations")
    _add_pair_flags(p)
    p.add_argument("--eps", type=float, default=1e-12, help="series truncation threshold")
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=_cmd_n1star)

    p = sub.add_parser("thresholds", help="SPRT boundaries for error targets")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=None, help="defaults to alpha")
    p.set_defaults(handler=_cmd_thresholds)

    for name, procedure in (("simulate", None), ("classical", "classical")):
        p = sub.add_parser(
            name,
            help="run one Monte Carlo experiment"
            + (" with the classical alternating baseline" if procedure else ""),
        )
        _add_pair_flags(p)
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--beta", type=float, default=None, help="defaults to alpha")
        p.add_argument("--replications", type=int, default=1000)
        p.add_argument("--seed", type=int, default=12345, help="master seed")
        if not procedure:
            p.add_argument("--procedure", choices=("adaptive", "classical"), default="adaptive")
        p.add_argument("--truth", choices=("H0", "H1", "random"), default="H0")
        p.add_argument("--cap", type=int, default=10_000_000)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--label", default="")
        p.set_defaults(handler=lambda client, args, proc=procedure: _cmd_simulate(client, args, proc))

    p = sub.add_parser("table", help="run a benchmark preset or a config document")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=("table1", "table2", "table3", "table4"))
    source.add_argument("--config", help="path to a YAML configuration document")
    p.add_argument("--seed", type=int, default=None, help="override every scenario's seed")
    p.add_argument("--replications", type=int, default=None, help="override replications")
    p.add_argument("--format", choices=("csv", "markdown"), default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--output", help="output path (default: preset/config choice)")
    p.set_defaults(handler=_cmd_table)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=None)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    try:
        with _make_client(args.server) as client:
            return args.handler(client, args)
    except ServiceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, httpx.HTTPError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
