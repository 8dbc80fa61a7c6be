import math

import numpy as np
import pytest

import simcache
from avtest import (AlternativeSpec, Family, ParameterRangeError, StatisticKind, TupleStrategy,
                    UnsupportedMethodError, statistics)
from avtest.alternatives import sample
from avtest.montecarlo import (CriticalValueTable, MonteCarloConfig, PowerEstimate,
                               critical_values, p_value, power_from_values, replicate_rng,
                               simulate, simulate_null, simulate_power, upper_quantile)

I2 = StatisticKind.integral(2)
D2 = StatisticKind.kolmogorov(2)


# ── Determinism ──────────────────────────────────────────────────────────────

def test_replicate_streams_are_independent_of_order():
    a = replicate_rng(7, 3).exponential(size=5)
    replicate_rng(7, 2).exponential(size=100)
    assert np.array_equal(a, replicate_rng(7, 3).exponential(size=5))
    assert not np.array_equal(a, replicate_rng(7, 4).exponential(size=5))
    assert not np.array_equal(a, replicate_rng(8, 3).exponential(size=5))


def test_replicate_matches_direct_evaluation():
    cfg = MonteCarloConfig(I2, 15, 4, seed=11)
    sim = simulate(cfg)
    for r in range(4):
        x = sample(None, replicate_rng(11, r), 15)
        assert (sim.integral[r], sim.kolmogorov[r]) == statistics(x, 2)


@pytest.mark.parametrize("workers", [4, 8])
def test_worker_count_does_not_change_results(workers):
    cfg = MonteCarloConfig(StatisticKind.integral(3), 20, 37, seed=5,
                           alternative=AlternativeSpec("gamma", 0.5))
    one = simulate(cfg, 1)
    many = simulate(cfg, workers)
    assert np.array_equal(one.integral, many.integral)
    assert np.array_equal(one.kolmogorov, many.kolmogorov)


def test_sampled_tuples_deterministic_across_workers():
    cfg = MonteCarloConfig(StatisticKind.kolmogorov(3), 12, 9, seed=2,
                           tuple_strategy=TupleStrategy.sampled(20_000))
    one = simulate(cfg, 1)
    assert np.array_equal(one.kolmogorov, simulate(cfg, 4).kolmogorov)
    assert one.tuple_error == pytest.approx(0.5 / math.sqrt(20_000))


def test_single_replicate():
    sim = simulate(MonteCarloConfig(D2, 10, 1, seed=3))
    assert sim.kolmogorov.shape == (1,)
    table = critical_values(MonteCarloConfig(D2, 10, 1, seed=3))
    assert all(v == sim.kolmogorov[0] for v in table.entries.values())


def test_results_are_readonly():
    sim = simulate(MonteCarloConfig(I2, 10, 3))
    with pytest.raises(ValueError):
        sim.integral[0] = 1.0


# ── Configuration ────────────────────────────────────────────────────────────

@pytest.mark.parametrize("kw", [dict(replicates=0), dict(n=1), dict(seed=-1)])
def test_config_validation(kw):
    base = dict(kind=I2, n=10, replicates=10, seed=0)
    base.update(kw)
    with pytest.raises(ParameterRangeError):
        MonteCarloConfig(**base)


def test_config_round_trip():
    cfg = MonteCarloConfig(StatisticKind.kolmogorov(3), 50, 200, 9,
                           TupleStrategy.sampled(1000, seed=4), AlternativeSpec("emnw", 0.25))
    assert MonteCarloConfig.from_dict(cfg.to_dict()) == cfg
    plain = MonteCarloConfig(I2, 50, 200)
    assert MonteCarloConfig.from_dict(plain.to_dict()) == plain


def test_simulate_null_rejects_alternative():
    with pytest.raises(ParameterRangeError):
        simulate_null(MonteCarloConfig(I2, 10, 5, alternative=AlternativeSpec("makeham", 0.5)))


# ── Quantiles ────────────────────────────────────────────────────────────────

def test_upper_quantile_convention():
    v = np.arange(1.0, 10_001.0)
    assert upper_quantile(v, 0.05) == 9500.0
    assert upper_quantile(v, 0.01) == 9900.0
    assert upper_quantile(v, 1.0) == 1.0
    with pytest.raises(ParameterRangeError):
        upper_quantile(v, 0.0)


def test_critical_values_monotone_in_alpha():
    table = critical_values(MonteCarloConfig(D2, 20, 400, seed=1))
    alphas = sorted(table.entries)
    qs = [table[a] for a in alphas]
    assert all(a >= b for a, b in zip(qs, qs[1:]))
    assert CriticalValueTable.from_dict(table.to_dict()) == table


# ── Power ────────────────────────────────────────────────────────────────────

def test_power_from_values():
    est = power_from_values(I2, np.array([0.1, 0.2, 0.3, 0.4]), 0.05, 0.25, None, 10)
    assert est.rejection_rate == 0.5
    assert est.mc_std_error == pytest.approx(0.25)
    assert PowerEstimate.from_dict(est.to_dict()) == est


def test_power_at_null_is_near_alpha():
    reps = 10_000
    null = simulate_null(MonteCarloConfig(I2, 30, reps, seed=0))
    q = upper_quantile(null, 0.1)
    est = simulate_power(MonteCarloConfig(I2, 30, reps, seed=1), 0.1, q)
    # the quantile is itself estimated, which doubles the variance
    assert abs(est.rejection_rate - 0.1) < 3 * math.sqrt(2 * 0.09 / reps)


def test_power_increases_with_theta():
    null = simulate_null(MonteCarloConfig(I2, 40, 1000, seed=0))
    q = upper_quantile(null, 0.05)
    rates = [simulate_power(MonteCarloConfig(I2, 40, 1000, seed=1,
                                             alternative=AlternativeSpec("makeham", th)),
                            0.05, q).rejection_rate for th in (0.5, 2.0, 8.0)]
    assert rates[0] < rates[1] < rates[2]


# ── p-values ─────────────────────────────────────────────────────────────────

def test_asymptotic_p_value():
    assert p_value(I2, 100, 0.0) == 0.5
    sd = 3 * math.sqrt(5 / 13608)
    assert p_value(I2, 100, 1.6448536269514722 * sd / 10) == pytest.approx(0.05, abs=1e-12)
    assert p_value(I2, 100, 0.01) < p_value(I2, 100, 0.005)


def test_asymptotic_not_available_for_kolmogorov():
    with pytest.raises(UnsupportedMethodError):
        p_value(D2, 100, 0.1)
    with pytest.raises(UnsupportedMethodError):
        p_value(I2, 100, 0.1, method="bootstrap")


def test_montecarlo_p_value():
    null = np.array([0.1, 0.2, 0.3])
    assert p_value(D2, 10, 0.25, "montecarlo", null) == 0.5
    assert p_value(D2, 10, 1.0, "montecarlo", null) == 0.25
    vals = simulate(MonteCarloConfig(D2, 20, 2000, seed=3)).values()
    p = p_value(D2, 20, float(np.median(vals)), "montecarlo", vals)
    assert p == pytest.approx(0.5, abs=0.02)


def test_montecarlo_p_value_simulates_when_needed():
    p1 = p_value(D2, 15, 0.2, "montecarlo", replicates=200, seed=4)
    p2 = p_value(D2, 15, 0.2, "montecarlo", replicates=200, seed=4)
    assert p1 == p2 and 0 < p1 <= 1


# ── n = 100 reference simulations ────────────────────────────────────────────

@pytest.mark.slow
def test_null_variance_matches_limit_at_n100():
    v = np.var(math.sqrt(simcache.N) * simcache.null_run(2).integral, ddof=1)
    assert v == pytest.approx(5 / 1512, rel=0.05)


@pytest.mark.slow
def test_null_variance_converges():
    # the n = 100 excess is a finite-sample effect that shrinks with n
    n = 200
    sim = simulate(MonteCarloConfig(I2, n, 10_000, seed=simcache.SEED))
    v = np.var(math.sqrt(n) * sim.integral, ddof=1)
    v100 = np.var(math.sqrt(simcache.N) * simcache.null_run(2).integral, ddof=1)
    assert abs(v - 5 / 1512) < abs(v100 - 5 / 1512)
    assert v == pytest.approx(5 / 1512, rel=0.05)


@pytest.mark.slow
def test_kolmogorov_null_95th_percentile():
    assert simcache.critical_value(2, Family.KOLMOGOROV, 0.05) == pytest.approx(0.313, abs=0.005)


@pytest.mark.slow
@pytest.mark.parametrize("k,published", [(2, (0.305, 0.313, 0.328, 0.334)),
                                         (3, (0.446, 0.455, 0.473, 0.481))])
def test_kolmogorov_critical_value_rows(k, published):
    got = [simcache.critical_value(k, Family.KOLMOGOROV, a) for a in (0.1, 0.05, 0.01, 0.005)]
    np.testing.assert_allclose(got, published, atol=0.01)


@pytest.mark.slow
@pytest.mark.parametrize("fam,k,family,published", [
    (Family.INTEGRAL, 2, "weibull", 0.9963),
    (Family.KOLMOGOROV, 3, "emnw", 0.7918),
])
def test_power_examples(fam, k, family, published):
    sim = simcache.alternative_run(k, family, 0.5)
    est = power_from_values(StatisticKind(fam, k), sim.values(fam), 0.05,
                            simcache.critical_value(k, fam, 0.05), None, simcache.N)
    assert abs(est.rejection_rate - published) <= 3 * est.mc_std_error


@pytest.mark.slow
@pytest.mark.parametrize("k", [2, 3, 4])
def test_power_monotone_in_theta(k):
    for fam in Family:
        for family in ("makeham", "weibull", "gamma", "emnw"):
            for a in (0.05, 0.025, 0.01):
                q = simcache.critical_value(k, fam, a)
                hi = np.mean(simcache.alternative_run(k, family, 0.5).values(fam) > q)
                lo = np.mean(simcache.alternative_run(k, family, 0.25).values(fam) > q)
                assert hi >= lo
