"""Population models and log-likelihood-ratio moments.

Three observation models are supported: Normal (mean, variance), Poisson
(rate), and the three-parameter Asymmetric Laplace (location, scale,
asymmetry).  A :class:`HypothesisPair` holds the two candidate densities
``(f0, f1)`` with ``f0`` designated superior; everything downstream is
driven by the per-observation log-likelihood ratio ``z(u) = log f0(u) -
log f1(u)`` and its first two moments under each member of the pair.

Moments come in two flavours: :func:`llr_moments_analytic` (closed forms,
Normal and Poisson only) and :func:`llr_moments_numeric` (piecewise
adaptive quadrature for continuous models, exact probability-weighted sums
for Poisson).  The two are deliberately independent routes to the same
four numbers and are cross-checked in the test suite.

All samplers draw from ``numpy.random.Generator`` streams and guarantee
that a block draw of size ``n`` consumes the generator identically to
``n`` successive scalar draws, so buffered and unbuffered sampling paths
produce bit-identical observation sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln


class UnsupportedVariantError(ValueError):
    """Raised when a closed form does not exist for the requested model."""


class QuadratureError(RuntimeError):
    """Quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    error_estimate : float
        The achieved absolute-error estimate.
    """

    def __init__(self, message: str, error_estimate: float):
        super().__init__(message)
        self.error_estimate = error_estimate


def _as_float_or_array(x):
    arr = np.asarray(x, dtype=float)
    return arr if arr.ndim else float(arr)


@dataclass(frozen=True)
class Normal:
    """Normal population with mean ``mean`` and variance ``variance``."""

    mean: float
    variance: float = 1.0

    def __post_init__(self):
        if not self.variance > 0:
            raise ValueError(f"variance must be > 0, got {self.variance}")

    @property
    def location(self) -> float:
        return self.mean

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        out = -0.5 * np.log(2.0 * np.pi * self.variance) - (x - self.mean) ** 2 / (2.0 * self.variance)
        return _as_float_or_array(out)

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.normal(self.mean, math.sqrt(self.variance)))

    def sample_block(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.normal(self.mean, math.sqrt(self.variance), n)


@lru_cache(maxsize=128)
def _poisson_cdf_table(rate: float) -> np.ndarray:
    """Cumulative probabilities F(0), F(1), ... built by the sequential
    recurrence p_{k} = p_{k-1} * rate / k, accumulated in index order.

    The table stops once the float64 CDF saturates (tail mass below the
    representable resolution), so inversion by ``searchsorted`` agrees
    bit-for-bit with a sequential search using the same recurrence.
    """
    p = math.exp(-rate)
    cdf = [p]
    k = 0
    while cdf[-1] < 1.0 and p > 0.0 and k < 10_000:
        k += 1
        p *= rate / k
        cdf.append(cdf[-1] + p)
        if cdf[-1] == cdf[-2] and p < 1e-300:
            break
    return np.asarray(cdf)


@dataclass(frozen=True)
class Poisson:
    """Poisson population with rate ``rate``.

    Sampling uses exact inversion of the CDF (sequential search), which
    keeps discrete log-likelihood ratios exact enough for the zero-sum
    tie branch of the allocation rule to be meaningful.
    """

    rate: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be > 0, got {self.rate}")

    @property
    def location(self) -> float:
        return self.rate

    def _check_support(self, x: np.ndarray):
        if np.any(x < 0) or not np.all(np.floor(x) == x):
            raise ValueError("Poisson support is the non-negative integers")

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        self._check_support(x)
        out = x * math.log(self.rate) - self.rate - gammaln(x + 1.0)
        return _as_float_or_array(out)

    def sample(self, rng: np.random.Generator) -> int:
        u = rng.random()
        return int(np.searchsorted(_poisson_cdf_table(self.rate), u, side="left"))

    def sample_block(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random(n)
        return np.searchsorted(_poisson_cdf_table(self.rate), u, side="left").astype(float)


@dataclass(frozen=True)
class AsymmetricLaplace:
    """Asymmetric Laplace population.

    Density ``scale/(asymmetry + 1/asymmetry) * exp((scale/asymmetry)(x-m))``
    for ``x < m`` and ``... * exp(-scale*asymmetry*(x-m))`` for ``x >= m``,
    where ``m`` is the location.  The mass left of the location is
    ``asymmetry^2 / (1 + asymmetry^2)``.
    """

    location: float
    scale: float
    asymmetry: float

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be > 0, got {self.scale}")
        if not self.asymmetry > 0:
            raise ValueError(f"asymmetry must be > 0, got {self.asymmetry}")

    @property
    def left_mass(self) -> float:
        k2 = self.asymmetry * self.asymmetry
        return k2 / (1.0 + k2)

    def log_density(self, x):
        x = np.asarray(x, dtype=float)
        d = x - self.location
        lognorm = math.log(self.scale / (self.asymmetry + 1.0 / self.asymmetry))
        out = lognorm + np.where(d < 0, (self.scale / self.asymmetry) * d, -self.scale * self.asymmetry * d)
        return _as_float_or_array(out)

    # Exact two-uniform sampler: pick the side by the left mass, then an
    # exponential tail distance (rate scale/asymmetry left, scale*asymmetry
    # right).  Rejection-free.
    def sample(self, rng: np.random.Generator) -> float:
        u = rng.random(2)
        return self._transform(u[0], u[1])

    def sample_block(self, rng: np.random.Generator, n: int) -> np.ndarray:
        u = rng.random((n, 2))
        e = -np.log1p(-u[:, 1])
        left = u[:, 0] < self.left_mass
        dist = np.where(left, e * (self.asymmetry / self.scale), e / (self.scale * self.asymmetry))
        return self.location + np.where(left, -dist, dist)

    def _transform(self, u_side: float, u_tail: float) -> float:
        # np.log1p, not math.log1p: keeps scalar draws bit-identical to
        # the vectorized path (the two libm implementations can differ
        # in the last ulp).
        e = -float(np.log1p(-u_tail))
        if u_side < self.left_mass:
            return self.location - e * (self.asymmetry / self.scale)
        return self.location + e / (self.scale * self.asymmetry)


DistributionSpec = Union[Normal, Poisson, AsymmetricLaplace]


@dataclass(frozen=True)
class HypothesisPair:
    """The ordered candidate pair ``(f0, f1)``; ``f0`` is the superior model.

    The null configuration assigns ``f0`` to the first data stream and
    ``f1`` to the second; the alternative swaps them.  Both members must
    be the same model family (hence share a support) and must differ.
    """

    f0: DistributionSpec
    f1: DistributionSpec

    def __post_init__(self):
        if type(self.f0) is not type(self.f1):
            raise ValueError(
                f"pair members must share a model family, got {type(self.f0).__name__} vs {type(self.f1).__name__}"
            )
        if self.f0 == self.f1:
            raise ValueError("pair members must differ (KL divergence would be zero)")

    def llr(self, u):
        """Per-observation log-likelihood ratio ``log f0(u) - log f1(u)``."""
        return self.f0.log_density(u) - self.f1.log_density(u)


@dataclass(frozen=True)
class LlrMoments:
    """First two moments of the LLR under each member of a pair.

    ``eta_x``/``sigma2_x`` are the mean and variance of ``z(U)`` for
    ``U ~ f0``; ``eta_y``/``sigma2_y`` for ``U ~ f1``.  Positivity of the
    KL divergences forces ``eta_x > 0 > eta_y``.
    """

    eta_x: float
    sigma2_x: float
    eta_y: float
    sigma2_y: float

    def __post_init__(self):
        if not self.eta_x > 0:
            raise ValueError(f"eta_x must be > 0, got {self.eta_x}")
        if not self.eta_y < 0:
            raise ValueError(f"eta_y must be < 0, got {self.eta_y}")
        if not (self.sigma2_x > 0 and self.sigma2_y > 0):
            raise ValueError("LLR variances must be > 0")


def llr_moments_analytic(pair: HypothesisPair) -> LlrMoments:
    """Closed-form LLR moments for Normal and Poisson pairs.

    Normal with means t0, t1 and variances s0, s1 (z quadratic in u):
        E[z | N(t0,s0)]   = log sqrt(s1/s0) + (d^2 + s0 - s1) / (2 s1)
        Var[z | N(t0,s0)] = d^2 s0 / s1^2 + (s0/s1 - 1)^2 / 2
    with d = t0 - t1; the common-variance case reduces to mean d^2/(2s)
    and variance d^2/s.

    Poisson with rates r0, r1 (z = u*log(r0/r1) - (r0 - r1)):
        E[z | P(r)]   = r*log(r0/r1) - (r0 - r1)
        Var[z | P(r)] = r*log(r0/r1)^2

    Asymmetric Laplace pairs have no comparably simple closed form; use
    :func:`llr_moments_numeric` instead.
    """
    f0, f1 = pair.f0, pair.f1
    if isinstance(f0, Normal):
        d = f0.mean - f1.mean
        s0, s1 = f0.variance, f1.variance
        eta_x = 0.5 * math.log(s1 / s0) + (d * d + s0 - s1) / (2.0 * s1)
        sigma2_x = d * d * s0 / (s1 * s1) + 0.5 * (s0 / s1 - 1.0) ** 2
        eta_y = -(0.5 * math.log(s0 / s1) + (d * d + s1 - s0) / (2.0 * s0))
        sigma2_y = d * d * s1 / (s0 * s0) + 0.5 * (s1 / s0 - 1.0) ** 2
        return LlrMoments(eta_x, sigma2_x, eta_y, sigma2_y)
    if isinstance(f0, Poisson):
        logr = math.log(f0.rate / f1.rate)
        diff = f0.rate - f1.rate
        return LlrMoments(
            eta_x=f0.rate * logr - diff,
            sigma2_x=f0.rate * logr * logr,
            eta_y=f1.rate * logr - diff,
            sigma2_y=f1.rate * logr * logr,
        )
    raise UnsupportedVariantError(
        "no closed-form LLR moments for this model family; use llr_moments_numeric"
    )


def _moment_integrals(pair: HypothesisPair, weight: DistributionSpec, tol: float) -> tuple[float, float]:
    """E[z] and E[z^2] under ``weight`` by piecewise adaptive quadrature.

    The real line is split at the sorted location parameters of the pair
    (the only points where an Asymmetric Laplace log-density has a kink),
    so each integrand is smooth on every piece; the unbounded end pieces
    are handled by quad's internal variable substitution.
    """
    points = sorted({pair.f0.location, pair.f1.location})
    edges = [-np.inf, *points, np.inf]

    def integrate(fn):
        total, err = 0.0, 0.0
        for lo, hi in zip(edges[:-1], edges[1:]):
            v, e = quad(fn, lo, hi, epsabs=tol / (4 * len(edges)), epsrel=1e-12, limit=200)
            total += v
            err += e
        return total, err

    def z_times_f(u):
        return pair.llr(u) * math.exp(weight.log_density(u))

    def z2_times_f(u):
        return pair.llr(u) ** 2 * math.exp(weight.log_density(u))

    m1, e1 = integrate(z_times_f)
    m2, e2 = integrate(z2_times_f)
    achieved = e1 + e2
    if achieved > tol:
        raise QuadratureError(
            f"quadrature error estimate {achieved:.3e} exceeds tol {tol:.3e}", achieved
        )
    return m1, m2


def _poisson_moment_sums(pair: HypothesisPair, weight: Poisson) -> tuple[float, float]:
    # Sum z*pmf and z^2*pmf until the remaining tail mass is below float
    # resolution; k is capped well past the relevant quantiles.
    kmax = int(weight.rate + 50.0 * math.sqrt(weight.rate) + 60.0)
    k = np.arange(kmax + 1, dtype=float)
    pmf = np.exp(weight.log_density(k))
    z = pair.llr(k)
    return float(np.sum(z * pmf)), float(np.sum(z * z * pmf))


def llr_moments_numeric(pair: HypothesisPair, tol: float = 1e-9) -> LlrMoments:
    """LLR moments by quadrature (continuous models) or exact sums (Poisson).

    Each first and second raw moment is computed to absolute error
    ``<= tol``; failure to converge raises :class:`QuadratureError` with
    the achieved error estimate.
    """
    if not tol > 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if isinstance(pair.f0, Poisson):
        m1x, m2x = _poisson_moment_sums(pair, pair.f0)
        m1y, m2y = _poisson_moment_sums(pair, pair.f1)
    else:
        m1x, m2x = _moment_integrals(pair, pair.f0, tol)
        m1y, m2y = _moment_integrals(pair, pair.f1, tol)
    return LlrMoments(
        eta_x=m1x,
        sigma2_x=m2x - m1x * m1x,
        eta_y=m1y,
        sigma2_y=m2y - m1y * m1y,
    )


def llr_moments(pair: HypothesisPair, tol: float = 1e-9) -> LlrMoments:
    """Closed-form moments where available, numeric otherwise."""
    try:
        return llr_moments_analytic(pair)
    except UnsupportedVariantError:
        return llr_moments_numeric(pair, tol)
