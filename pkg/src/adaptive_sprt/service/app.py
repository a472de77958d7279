"""The HTTP service wrapping the simulator.

Stateless JSON endpoints over the core package: analytic quantities are
instant, ``/simulate`` and ``/table`` run Monte Carlo jobs synchronously
(full benchmark tables take minutes).  All results are pure functions of
the request, so identical requests return identical payloads.
"""

from __future__ import annotations

from dataclasses import replace

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, analytics
from ..config import DEFAULT_REPLICATIONS, DEFAULT_SEED, expand_table, parse_config, preset_table
from ..distributions import (
    UnsupportedVariantError,
    llr_moments,
    llr_moments_analytic,
    llr_moments_numeric,
)
from ..montecarlo import run_experiment
from ..reporting import render_csv, render_markdown
from ..stopping import NonTerminationError
from . import schemas

app = FastAPI(
    title="adaptive-sprt",
    description=(
        "Adaptive sequential hypothesis testing: log-likelihood-ratio moments, "
        "inferior-allocation limits, SPRT thresholds, and Monte Carlo operating "
        "characteristics for Normal, Poisson and Asymmetric Laplace populations."
    ),
    version=__version__,
)


@app.exception_handler(ValueError)
async def _domain_error(request: Request, exc: ValueError):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.exception_handler(NonTerminationError)
async def _non_termination(request: Request, exc: NonTerminationError):
    return JSONResponse(status_code=500, content={"detail": str(exc)})


@app.get("/health", response_model=schemas.HealthResponse)
def health() -> schemas.HealthResponse:
    return schemas.HealthResponse(status="ok", version=__version__)


def _moments_response(pair, method: str, tol: float) -> schemas.MomentsResponse:
    if method == "analytic":
        m, used = llr_moments_analytic(pair), "analytic"
    elif method == "numeric":
        m, used = llr_moments_numeric(pair, tol), "numeric"
    else:
        try:
            m, used = llr_moments_analytic(pair), "analytic"
        except UnsupportedVariantError:
            m, used = llr_moments_numeric(pair, tol), "numeric"
    return schemas.MomentsResponse(
        eta_x=m.eta_x, sigma2_x=m.sigma2_x, eta_y=m.eta_y, sigma2_y=m.sigma2_y, method=used
    )


@app.post("/moments", response_model=schemas.MomentsResponse)
def moments(req: schemas.MomentsRequest) -> schemas.MomentsResponse:
    return _moments_response(req.pair.to_core(), req.method, req.tol)


@app.post("/n1star", response_model=schemas.N1StarResponse)
def n1star(req: schemas.N1StarRequest) -> schemas.N1StarResponse:
    pair = req.pair.to_core()
    resp = _moments_response(pair, "auto", req.tol)
    m = llr_moments(pair, req.tol)
    return schemas.N1StarResponse(
        closed_form=analytics.n1_star_closed_form(m),
        series=analytics.n1_star_series(m, req.eps),
        moments=resp,
    )


@app.post("/thresholds", response_model=schemas.ThresholdsResponse)
def thresholds(req: schemas.ThresholdsRequest) -> schemas.ThresholdsResponse:
    t = analytics.wald_thresholds(req.alpha, req.beta)
    return schemas.ThresholdsResponse(a=t.a, b=t.b, alpha=t.alpha, beta=t.beta)


@app.post("/simulate", response_model=schemas.SummaryResponse)
def simulate(req: schemas.SimulateRequest) -> schemas.SummaryResponse:
    summary = run_experiment(req.to_core(), workers=req.workers)
    return schemas.SummaryResponse.from_core(summary)


@app.post("/table", response_model=schemas.TableResponse)
def table(req: schemas.TableRequest) -> schemas.TableResponse:
    if req.preset is not None:
        spec = preset_table(
            req.preset,
            seed=req.seed if req.seed is not None else DEFAULT_SEED,
            replications=req.replications if req.replications is not None else DEFAULT_REPLICATIONS,
            fmt=req.format or "csv",
        )
        configs = expand_table(spec)
    else:
        configs, spec = parse_config(req.config)
        if req.seed is not None or req.replications is not None:
            scenarios = tuple(
                replace(
                    sc,
                    seed=req.seed if req.seed is not None else sc.seed,
                    replications=req.replications if req.replications is not None else sc.replications,
                )
                for sc in spec.scenarios
            )
            spec = replace(spec, scenarios=scenarios)
            configs = expand_table(spec)
        if req.format is not None:
            spec = replace(spec, format=req.format)
    summaries = [run_experiment(c, workers=req.workers) for c in configs]
    content = render_csv(summaries) if spec.format == "csv" else render_markdown(summaries)
    return schemas.TableResponse(
        format=spec.format,
        content=content,
        suggested_path=spec.path,
        rows=[schemas.SummaryResponse.from_core(s) for s in summaries],
    )
