"""Tests for thresholds, the inferior-allocation limit, ASN and log(PICS)."""

from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest

from adaptive_sprt import (
    HypothesisPair,
    LlrMoments,
    Normal,
    Poisson,
    analytic_summary,
    asn_wald,
    llr_moments,
    llr_moments_analytic,
    log_pics_approx,
    n1_star_closed_form,
    n1_star_series,
    norm_cdf,
    wald_thresholds,
)
from conftest import all_benchmark_pairs


def moments_n(theta0: float, theta1: float) -> LlrMoments:
    return llr_moments_analytic(HypothesisPair(Normal(theta0), Normal(theta1)))


class TestNormCdf:
    def test_against_mpmath(self):
        # includes deep tails; contract is 1e-12 absolute, ndtr is far better
        xs = np.concatenate([np.linspace(-8, 8, 161), [-12.0, -10.0, 10.0, 12.0]])
        for x in xs:
            assert abs(norm_cdf(x) - float(mpmath.ncdf(x))) < 1e-13

    def test_vectorized(self):
        x = np.array([-1.0, 0.0, 1.0])
        out = norm_cdf(x)
        assert out.shape == (3,)
        assert out[1] == pytest.approx(0.5)


class TestWaldThresholds:
    def test_formula(self):
        t = wald_thresholds(1e-3, 1e-3)
        assert t.a == pytest.approx(math.log(999), rel=1e-15)
        assert t.b == pytest.approx(-math.log(999), rel=1e-12)

    def test_degenerate_half(self):
        t = wald_thresholds(0.5, 0.5)
        assert t.a == 0.0
        assert t.b == 0.0

    def test_one_percent(self):
        t = wald_thresholds(1e-2, 1e-2)
        assert t.a == pytest.approx(math.log(99), rel=1e-15)

    @pytest.mark.parametrize("alpha,beta", [(0.0, 0.5), (1.0, 0.5), (0.5, 0.0), (0.5, 1.0), (-0.1, 0.2)])
    def test_rejects_out_of_range(self, alpha, beta):
        with pytest.raises(ValueError):
            wald_thresholds(alpha, beta)

    def test_round_trip_identity(self):
        # exp(a)*alpha = 1-beta and exp(b)*(1-alpha) = beta to machine precision
        for alpha in (1e-2, 1e-3, 1e-5):
            for beta in (1e-2, 1e-4):
                t = wald_thresholds(alpha, beta)
                assert math.exp(t.a) * alpha == pytest.approx(1 - beta, rel=1e-12)
                assert math.exp(t.b) * (1 - alpha) == pytest.approx(beta, rel=1e-12)

    def test_sign_when_errors_small(self):
        t = wald_thresholds(0.3, 0.3)
        assert t.a > 0 > t.b


class TestN1StarClosedForm:
    def test_normal_benchmark(self):
        assert n1_star_closed_form(moments_n(0.1, 0.0)) == pytest.approx(400.0, rel=1e-12)

    def test_poisson_benchmark(self):
        m = llr_moments_analytic(HypothesisPair(Poisson(2.0), Poisson(1.0)))
        assert n1_star_closed_form(m) == pytest.approx(5.771, abs=1e-3)

    def test_symmetric_normal(self):
        for t0 in (0.25, 0.5, 1.0):
            m = llr_moments_analytic(HypothesisPair(Normal(-t0), Normal(t0)))
            assert n1_star_closed_form(m) == pytest.approx(1.0 / t0**2, rel=1e-12)

    def test_scale_invariance_exact(self):
        # scaling the LLR by a power of two is exact in floating point:
        # eta -> c*eta, sigma2 -> c^2*sigma2 leaves the value identical
        m = llr_moments_analytic(HypothesisPair(Poisson(2.5), Poisson(2.0)))
        for c in (0.5, 2.0, 4.0, 1024.0):
            scaled = LlrMoments(c * m.eta_x, c * c * m.sigma2_x, c * m.eta_y, c * c * m.sigma2_y)
            assert n1_star_closed_form(scaled) == n1_star_closed_form(m)


class TestN1StarSeries:
    def test_rejects_bad_eps(self):
        with pytest.raises(ValueError):
            n1_star_series(moments_n(0.5, 0.0), eps=0.0)

    def test_normal_half(self):
        value = n1_star_series(moments_n(0.5, 0.0), eps=1e-12)
        assert 15.0 <= value <= 16.0
        assert value == pytest.approx(15.541414183294497, rel=1e-9)

    def test_normal_tenth_within_one_percent(self):
        value = n1_star_series(moments_n(0.1, 0.0), eps=1e-12)
        assert value == pytest.approx(400.0, rel=0.01)

    def test_fast_decay_side(self):
        m = LlrMoments(5.0, 1.0, -5.0, 1.0)
        assert n1_star_series(m) < 1e-4

    def test_agrees_with_closed_form_on_benchmarks(self):
        for pair in all_benchmark_pairs():
            m = llr_moments(pair)
            closed = n1_star_closed_form(m)
            series = n1_star_series(m)
            assert abs(series - closed) <= max(1.0, 0.05 * closed)


class TestAsnWald:
    def test_normal_tenth(self):
        t = wald_thresholds(1e-3, 1e-3)
        asn_k0, asn_k1 = asn_wald(moments_n(0.1, 0.0), t)
        assert asn_k0 == pytest.approx(1378.5882538182502, rel=1e-12)
        assert asn_k0 > 0 and asn_k1 > 0

    def test_symmetric_moments_give_equal_asns(self):
        t = wald_thresholds(1e-3, 1e-3)
        asn_k0, asn_k1 = asn_wald(moments_n(0.5, 0.0), t)
        assert asn_k0 == pytest.approx(asn_k1, rel=1e-12)

    def test_normal_half_one_percent(self):
        t = wald_thresholds(1e-2, 1e-2)
        asn_k0, _ = asn_wald(moments_n(0.5, 0.0), t)
        assert asn_k0 == pytest.approx(36.0, abs=0.1)

    def test_monotone_in_error_targets(self):
        m = moments_n(0.3, 0.0)
        values = [asn_wald(m, wald_thresholds(a, a))[0] for a in (1e-2, 1e-3, 1e-4, 1e-5)]
        assert all(x < y for x, y in zip(values, values[1:]))

    def test_requires_alpha_beta_below_one(self):
        with pytest.raises(ValueError):
            asn_wald(moments_n(0.5, 0.0), wald_thresholds(0.6, 0.6))


class TestLogPics:
    def test_normal_tenth(self):
        t = wald_thresholds(1e-3, 1e-3)
        lp_i, lp_ii = log_pics_approx(moments_n(0.1, 0.0), t)
        assert lp_ii == pytest.approx(-6.892941269091257, rel=1e-12)
        assert lp_i < 0 and lp_ii < 0
        # leading term sits within the o(.) slack of log(beta)
        assert lp_ii == pytest.approx(math.log(1e-3), abs=0.1)

    def test_symmetric(self):
        t = wald_thresholds(1e-3, 1e-3)
        lp_i, lp_ii = log_pics_approx(moments_n(0.5, 0.0), t)
        assert lp_i == pytest.approx(lp_ii, rel=1e-12)

    def test_monotone_in_a(self):
        m = moments_n(0.2, 0.0)
        beta = 1e-3
        values = [log_pics_approx(m, wald_thresholds(a, beta))[1] for a in (1e-2, 1e-3, 1e-4)]
        assert values[0] > values[1] > values[2]


class TestAnalyticSummary:
    def test_fields_consistent(self):
        m = moments_n(0.5, 0.0)
        t = wald_thresholds(1e-3, 1e-3)
        s = analytic_summary(m, t)
        assert s.n1_star_closed == n1_star_closed_form(m)
        assert s.n1_star_series == n1_star_series(m)
        assert (s.asn_k0, s.asn_k1) == asn_wald(m, t)
        assert (s.log_pics_i, s.log_pics_ii) == log_pics_approx(m, t)
        assert s.n1_star_closed > 0 and math.isfinite(s.n1_star_closed)
