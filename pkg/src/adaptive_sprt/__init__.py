"""Adaptive sequential hypothesis testing with LLR-driven allocation.

A simulator and analytics library for a two-population sequential test
that steers sampling toward the better population, stops by SPRT
boundaries, and keeps the expected number of draws from the inferior
population finite — with the closed form for that limit, Wald ASN
approximations, and a reproducible Monte Carlo harness exposed over a
small HTTP service and CLI.
"""

__version__ = "0.1.0"

from .allocation import (
    Hypothesis,
    StreamId,
    TrialState,
    TrialStreams,
    active_llr,
    allocate_next,
    apply_observation,
    inferior_stream,
    init_trial,
    superior_stream,
)
from .analytics import (
    AnalyticSummary,
    Thresholds,
    analytic_summary,
    asn_wald,
    log_pics_approx,
    n1_star_closed_form,
    n1_star_series,
    norm_cdf,
    wald_thresholds,
)
from .distributions import (
    AsymmetricLaplace,
    DistributionSpec,
    HypothesisPair,
    LlrMoments,
    Normal,
    Poisson,
    QuadratureError,
    UnsupportedVariantError,
    llr_moments,
    llr_moments_analytic,
    llr_moments_numeric,
)
from .montecarlo import (
    ExperimentConfig,
    ExperimentSummary,
    Procedure,
    TruthMode,
    derive_substream,
    run_experiment,
    run_replication,
)
from .stopping import (
    Decision,
    NonTerminationError,
    TrialOutcome,
    classify_outcome,
    run_adaptive_trial,
    run_classical_trial,
    sprt_decision,
)

__all__ = [
    "__version__",
    "AnalyticSummary",
    "AsymmetricLaplace",
    "Decision",
    "DistributionSpec",
    "ExperimentConfig",
    "ExperimentSummary",
    "Hypothesis",
    "HypothesisPair",
    "LlrMoments",
    "NonTerminationError",
    "Normal",
    "Poisson",
    "Procedure",
    "QuadratureError",
    "StreamId",
    "Thresholds",
    "TrialOutcome",
    "TrialState",
    "TrialStreams",
    "TruthMode",
    "UnsupportedVariantError",
    "active_llr",
    "allocate_next",
    "analytic_summary",
    "apply_observation",
    "asn_wald",
    "classify_outcome",
    "derive_substream",
    "inferior_stream",
    "init_trial",
    "llr_moments",
    "llr_moments_analytic",
    "llr_moments_numeric",
    "log_pics_approx",
    "n1_star_closed_form",
    "n1_star_series",
    "norm_cdf",
    "run_adaptive_trial",
    "run_classical_trial",
    "run_experiment",
    "run_replication",
    "sprt_decision",
    "superior_stream",
    "wald_thresholds",
]
