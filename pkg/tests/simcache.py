"""Shared n = 100 simulations, run once per test session.

Null runs that set critical values use ``SEED``; the independent null run
used to measure size uses ``SEED + 2``; alternative runs use ``SEED + 1``.
Both statistics of a given order come from the same replicates.
"""

from functools import lru_cache

import numpy as np

from avtest import AlternativeSpec, StatisticKind, TupleStrategy
from avtest.montecarlo import MonteCarloConfig, simulate, upper_quantile

N = 100
REPLICATES = 10_000
SEED = 7


def exact(k, n=N):
    return TupleStrategy.exact(budget=n ** k)


@lru_cache(maxsize=None)
def null_run(k, seed=SEED, n=N, reps=REPLICATES):
    return simulate(MonteCarloConfig(StatisticKind.integral(k), n, reps, seed, exact(k, n)))


@lru_cache(maxsize=None)
def alternative_run(k, family, theta, seed=SEED + 1, n=N, reps=REPLICATES):
    alt = AlternativeSpec(family, theta)
    return simulate(MonteCarloConfig(StatisticKind.integral(k), n, reps, seed, exact(k, n), alt))


def critical_value(k, family, alpha):
    """Upper-``alpha`` quantile of the ``family`` statistic from the reference null run."""
    return upper_quantile(np.sort(null_run(k).values(family)), alpha)
