"""Shared fixtures: the benchmark parameter grids used across the suite."""

from __future__ import annotations

import pytest

from adaptive_sprt import AsymmetricLaplace, HypothesisPair, Normal, Poisson

NORMAL_MEANS = [(0.1, 0.0), (0.2, 0.0), (0.3, 0.0), (0.4, 0.0), (0.5, 0.0)]
POISSON_RATES = [(2.5, 2.0), (3.0, 2.5), (3.5, 2.5), (2.0, 1.0), (1.5, 0.5), (2.5, 1.0)]
AL_PARAMS = [
    ((0.2, 2.0, 0.7), (0.0, 1.0, 0.3)),
    ((0.2, 1.0, 0.8), (0.0, 2.0, 0.2)),
    ((0.4, 1.0, 0.6), (0.0, 1.0, 0.2)),
    ((0.0, 2.0, 0.7), (0.2, 2.0, 0.3)),
]


def normal_pairs() -> list[HypothesisPair]:
    return [HypothesisPair(Normal(a), Normal(b)) for a, b in NORMAL_MEANS]


def poisson_pairs() -> list[HypothesisPair]:
    return [HypothesisPair(Poisson(a), Poisson(b)) for a, b in POISSON_RATES]


def al_pairs() -> list[HypothesisPair]:
    return [
        HypothesisPair(AsymmetricLaplace(*a), AsymmetricLaplace(*b)) for a, b in AL_PARAMS
    ]


def all_benchmark_pairs() -> list[HypothesisPair]:
    return normal_pairs() + poisson_pairs() + al_pairs()


@pytest.fixture(scope="session")
def benchmark_pairs() -> list[HypothesisPair]:
    return all_benchmark_pairs()
