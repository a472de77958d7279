"""Closed-form operating characteristics of the adaptive procedure.

Everything here is a pure function of the LLR moments and the error
targets: the limiting expected number of inferior allocations (closed
form and its defining Gaussian-tail series), the decision thresholds,
the Wald approximations to the average sample number, and the leading
log-probability of incorrect selection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .distributions import LlrMoments


def norm_cdf(x):
    """Standard normal CDF, absolute error below 1e-12 (erfc-based)."""
    return ndtr(x)


@dataclass(frozen=True)
class Thresholds:
    """SPRT stopping boundaries for error targets ``(alpha, beta)``.

    ``a = log((1-beta)/alpha)`` and ``b = log(beta/(1-alpha))``; whenever
    ``alpha + beta < 1`` these satisfy ``a > 0 > b``.
    """

    a: float
    b: float
    alpha: float
    beta: float


def wald_thresholds(alpha: float, beta: float) -> Thresholds:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if not 0.0 < beta < 1.0:
        raise ValueError(f"beta must be in (0, 1), got {beta}")
    return Thresholds(
        a=math.log((1.0 - beta) / alpha),
        b=math.log(beta / (1.0 - alpha)),
        alpha=alpha,
        beta=beta,
    )


def n1_star_closed_form(m: LlrMoments) -> float:
    """Limiting expected allocations to the inferior population.

    The integral approximation of the two-sided Gaussian-tail series,
    ``(sigma2_x/eta_x^2 + sigma2_y/eta_y^2) / 2``.
    """
    return 0.5 * (m.sigma2_x / (m.eta_x * m.eta_x) + m.sigma2_y / (m.eta_y * m.eta_y))


def _tail_series(c: float, eps: float) -> float:
    """Sum Phi(-c*sqrt(m)) for m = 1, 2, ... truncated per the stop rule.

    Truncation: stop after index M once the current term is below ``eps``
    AND ``M > (8/c)^2`` (so c*sqrt(M) > 8).  The omitted remainder obeys
    the geometric-style bound

        sum_{m>M} Phi(-c sqrt(m)) <= phi(c sqrt(M)) / (c sqrt(M))
                                     * r / (1 - r),   r = exp(-c^2 / 2),

    which follows from the Mills ratio Phi(-z) <= phi(z)/z and
    phi(c*sqrt(M+k)) = phi(c*sqrt(M)) * r^k; at the stop point it is far
    below ``eps``.
    """
    floor_m = (8.0 / c) ** 2
    total = 0.0
    block = 8192
    start = 1
    while True:
        idx = np.arange(start, start + block, dtype=float)
        terms = ndtr(-c * np.sqrt(idx))
        total += float(np.sum(terms))
        last = float(terms[-1])
        stop_at = start + block - 1
        if last < eps and stop_at > floor_m:
            return total
        start += block
        if start > 10**9:  # safety net; unreachable for sane moments
            raise RuntimeError("series truncation rule failed to trigger")


def n1_star_series(m: LlrMoments, eps: float = 1e-12) -> float:
    """Truncated two-sided tail series for the inferior-allocation limit.

    One Gaussian tail per side: ``sum_i Phi(-(eta_x/sigma_x) sqrt(i)) +
    sum_j Phi((eta_y/sigma_y) sqrt(j))``.  Sits slightly below the closed
    form (the Euler-Maclaurin boundary term is about Phi(0)/2 = 1/4 per
    side, plus higher order).
    """
    if not eps > 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    cx = m.eta_x / math.sqrt(m.sigma2_x)
    cy = -m.eta_y / math.sqrt(m.sigma2_y)
    return _tail_series(cx, eps) + _tail_series(cy, eps)


def asn_wald(m: LlrMoments, t: Thresholds) -> tuple[float, float]:
    """Wald approximations to the average sample number under each truth.

    ``asn_k0 = (b(1-alpha) + a*alpha) / (-eta_x)`` and
    ``asn_k1 = (b*beta + a(1-beta)) / (-eta_y)``.
    """
    if not t.alpha + t.beta < 1.0:
        raise ValueError("asn_wald requires alpha + beta < 1")
    asn_k0 = (t.b * (1.0 - t.alpha) + t.a * t.alpha) / (-m.eta_x)
    asn_k1 = (t.b * t.beta + t.a * (1.0 - t.beta)) / (-m.eta_y)
    return asn_k0, asn_k1


def log_pics_approx(m: LlrMoments, t: Thresholds) -> tuple[float, float]:
    """Leading term of log P(incorrect selection) under each truth.

    Returns ``(log_pics_i, log_pics_ii) = (eta_y * asn_k1, -eta_x * asn_k0)``;
    the o(ASN) remainder is dropped.
    """
    asn_k0, asn_k1 = asn_wald(m, t)
    return m.eta_y * asn_k1, -m.eta_x * asn_k0


@dataclass(frozen=True)
class AnalyticSummary:
    """All closed-form reference quantities for one (pair, alpha, beta)."""

    n1_star_closed: float
    n1_star_series: float
    asn_k0: float
    asn_k1: float
    log_pics_i: float
    log_pics_ii: float


def analytic_summary(m: LlrMoments, t: Thresholds, eps: float = 1e-12) -> AnalyticSummary:
    asn_k0, asn_k1 = asn_wald(m, t)
    lp_i, lp_ii = log_pics_approx(m, t)
    return AnalyticSummary(
        n1_star_closed=n1_star_closed_form(m),
        n1_star_series=n1_star_series(m, eps),
        asn_k0=asn_k0,
        asn_k1=asn_k1,
        log_pics_i=lp_i,
        log_pics_ii=lp_ii,
    )
