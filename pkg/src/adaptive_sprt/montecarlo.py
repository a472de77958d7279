"""Reproducible replication of trials and aggregation into summaries.

Each replication owns disjoint random substreams derived by
avalanche-quality mixing of ``(master_seed, replication_index)`` (numpy's
``SeedSequence``), so results are bit-identical whatever the degree of
parallelism: trials are computed per index and aggregated in index
order, never in completion order.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat

import numpy as np

from . import analytics
from .allocation import Hypothesis, TrialStreams
from .distributions import HypothesisPair, llr_moments
from .stopping import DEFAULT_CAP, TrialOutcome, run_adaptive_trial, run_classical_trial

WORKERS_ENV_VAR = "ADAPTIVE_SPRT_WORKERS"


class Procedure(str, enum.Enum):
    ADAPTIVE = "adaptive"
    CLASSICAL = "classical"


class TruthMode(str, enum.Enum):
    """True configuration of the streams, or fresh randomization per trial."""

    H0 = "H0"
    H1 = "H1"
    RANDOM = "random"


@dataclass(frozen=True)
class ExperimentConfig:
    pair: HypothesisPair
    alpha: float
    beta: float
    master_seed: int
    replications: int = 1000
    procedure: Procedure = Procedure.ADAPTIVE
    truth: TruthMode = TruthMode.H0
    cap: int = DEFAULT_CAP
    label: str = ""

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must be in (0, 1), got {self.beta}")
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if self.master_seed < 0:
            raise ValueError(f"master_seed must be >= 0, got {self.master_seed}")
        if self.cap < 2:
            raise ValueError(f"cap must be >= 2, got {self.cap}")


@dataclass(frozen=True)
class ExperimentSummary:
    """Monte Carlo estimates paired with their analytic reference values.

    ``asn`` follows each procedure's published accounting: total draws
    for adaptive trials, statistic rounds for classical ones (where one
    round samples both populations; ``mean_total_draws`` carries the
    total exposure in either case).
    """

    config: ExperimentConfig
    replications: int
    pcs: float
    se_pcs: float
    mean_n_inferior: float
    se_n_inferior: float
    asn: float
    se_asn: float
    mean_total_draws: float
    se_total_draws: float
    n1_star_closed: float
    n1_star_series: float
    asn_wald_k0: float
    asn_wald_k1: float


def derive_substream(master_seed: int, replication_index: int) -> np.random.Generator:
    """A deterministic, statistically independent stream for one index."""
    seq = np.random.SeedSequence([master_seed, replication_index])
    return np.random.Generator(np.random.PCG64(seq))


def _trial_setup(cfg: ExperimentConfig, index: int) -> TrialStreams:
    seq = np.random.SeedSequence([cfg.master_seed, index])
    x, y, coin, truth_coin = (np.random.Generator(np.random.PCG64(k)) for k in seq.spawn(4))
    if cfg.truth is TruthMode.RANDOM:
        truth = Hypothesis.H0 if truth_coin.random() < 0.5 else Hypothesis.H1
    else:
        truth = Hypothesis(cfg.truth.value)
    return TrialStreams(cfg.pair, truth, x, y, coin)


def run_replication(cfg: ExperimentConfig, index: int) -> TrialOutcome:
    """Run replication ``index`` of the experiment on its own substreams."""
    streams = _trial_setup(cfg, index)
    thresholds = analytics.wald_thresholds(cfg.alpha, cfg.beta)
    run = run_adaptive_trial if cfg.procedure is Procedure.ADAPTIVE else run_classical_trial
    return run(cfg.pair, streams.truth, thresholds, cfg.cap, streams=streams)


def _replication_batch(cfg: ExperimentConfig, lo: int, hi: int):
    n = hi - lo
    correct = np.empty(n, dtype=bool)
    n_inferior = np.empty(n, dtype=np.int64)
    n_total = np.empty(n, dtype=np.int64)
    steps_stat = np.empty(n, dtype=np.int64)
    for k, i in enumerate(range(lo, hi)):
        out = run_replication(cfg, i)
        correct[k] = out.correct
        n_inferior[k] = out.n_inferior
        n_total[k] = out.n_total
        steps_stat[k] = out.steps_statistic
    return correct, n_inferior, n_total, steps_stat


def resolve_workers(workers: int | None = None) -> int:
    """Explicit argument, else the environment override, else one per CPU."""
    if workers is None:
        env = os.environ.get(WORKERS_ENV_VAR)
        workers = int(env) if env else (os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(values))
    if len(values) < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1) / math.sqrt(len(values)))


def run_experiment(cfg: ExperimentConfig, workers: int | None = None) -> ExperimentSummary:
    """Run all replications and aggregate into an :class:`ExperimentSummary`.

    The summary is a pure function of ``cfg``: per-replication outcomes
    are gathered into index-ordered arrays before any reduction, so the
    result does not depend on ``workers``.
    """
    workers = resolve_workers(workers)
    n = cfg.replications
    if workers == 1 or n < 4 * workers:
        parts = [_replication_batch(cfg, 0, n)]
    else:
        bounds = np.linspace(0, n, 4 * workers + 1, dtype=int)
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_replication_batch, repeat(cfg), bounds[:-1], bounds[1:]))
    correct, n_inferior, n_total, steps_stat = (np.concatenate(cols) for cols in zip(*parts))

    pcs, se_pcs = _mean_se(correct.astype(float))
    mean_inf, se_inf = _mean_se(n_inferior.astype(float))
    asn_samples = n_total if cfg.procedure is Procedure.ADAPTIVE else steps_stat
    asn, se_asn = _mean_se(asn_samples.astype(float))
    total, se_total = _mean_se(n_total.astype(float))

    moments = llr_moments(cfg.pair)
    if cfg.alpha + cfg.beta < 1.0:
        thresholds = analytics.wald_thresholds(cfg.alpha, cfg.beta)
        asn_k0, asn_k1 = analytics.asn_wald(moments, thresholds)
    else:
        asn_k0 = asn_k1 = float("nan")
    return ExperimentSummary(
        config=cfg,
        replications=n,
        pcs=pcs,
        se_pcs=se_pcs,
        mean_n_inferior=mean_inf,
        se_n_inferior=se_inf,
        asn=asn,
        se_asn=se_asn,
        mean_total_draws=total,
        se_total_draws=se_total,
        n1_star_closed=analytics.n1_star_closed_form(moments),
        n1_star_series=analytics.n1_star_series(moments),
        asn_wald_k0=asn_k0,
        asn_wald_k1=asn_k1,
    )
