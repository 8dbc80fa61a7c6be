"""Seeded Monte Carlo engine for null distributions, critical values and powers.

Replicate ``r`` of a run with seed ``s`` draws its uniforms from a Philox
stream with key ``s`` and counter block ``r``, so every replicate is a pure
function of ``(s, r)``.  Workers take contiguous replicate ranges and results
are written back by index, which makes the output independent of the worker
count.  Both statistics of order ``k`` are computed from one set of tuple
counts, so one simulation serves the integral and the Kolmogorov tables.
"""

from __future__ import annotations

import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.stats import norm

from . import alternatives, kernels
from .alternatives import AlternativeSpec
from .errors import ParameterRangeError, UnsupportedMethodError
from .sample import Family, Sample, StatisticKind, TupleStrategy, _evaluate, default_strategy

DEFAULT_ALPHAS = (0.1, 0.05, 0.025, 0.01, 0.005)
_KEY_MASK = 2**128 - 1


def replicate_rng(seed: int, r: int) -> np.random.Generator:
    """Generator for replicate ``r``: Philox keyed on ``seed``, counter block ``r``."""
    bitgen = np.random.Philox(key=int(seed) & _KEY_MASK, counter=[0, 0, 0, int(r)])
    return np.random.Generator(bitgen)


def _replicate_tuple_seed(seed: int, r: int) -> int:
    state = np.random.SeedSequence([int(seed), int(r), 1]).generate_state(4, np.uint32)
    return int.from_bytes(state.tobytes(), "little")


@dataclass(frozen=True)
class MonteCarloConfig:
    kind: StatisticKind
    n: int
    replicates: int
    seed: int = 0
    tuple_strategy: TupleStrategy | None = None
    alternative: AlternativeSpec | None = None

    def __post_init__(self):
        if int(self.replicates) < 1:
            raise ParameterRangeError(f"replicates must be >= 1, got {self.replicates!r}")
        if int(self.n) < 2:
            raise ParameterRangeError(f"n must be >= 2, got {self.n!r}")
        if int(self.seed) < 0:
            raise ParameterRangeError(f"seed must be a nonnegative integer, got {self.seed!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "replicates", int(self.replicates))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def strategy(self) -> TupleStrategy:
        return self.tuple_strategy or default_strategy(self.n, self.kind.k)

    def null(self) -> "MonteCarloConfig":
        return replace(self, alternative=None)

    def to_dict(self):
        ts = self.tuple_strategy
        return {"kind": self.kind.to_dict(), "n": self.n, "replicates": self.replicates,
                "seed": self.seed,
                "tuple_strategy": None if ts is None else {
                    "mode": ts.mode, "budget": ts.budget, "sample_count": ts.sample_count,
                    "seed": ts.seed},
                "alternative": None if self.alternative is None else self.alternative.to_dict()}

    @classmethod
    def from_dict(cls, d):
        ts = d.get("tuple_strategy")
        alt = d.get("alternative")
        return cls(StatisticKind.from_dict(d["kind"]), int(d["n"]), int(d["replicates"]),
                   int(d["seed"]), None if ts is None else TupleStrategy(**ts),
                   None if alt is None else AlternativeSpec.from_dict(alt))


@dataclass(frozen=True)
class SimulationResult:
    """Per-replicate values of both statistics, in replicate order."""

    config: MonteCarloConfig
    integral: np.ndarray
    kolmogorov: np.ndarray
    tuple_error: float | None = None

    def values(self, family: Family | None = None) -> np.ndarray:
        family = self.config.kind.family if family is None else Family(family)
        return self.integral if family is Family.INTEGRAL else self.kolmogorov


@dataclass(frozen=True)
class CriticalValueTable:
    kind: StatisticKind
    n: int
    replicates: int
    seed: int
    entries: dict = field(default_factory=dict)

    def __getitem__(self, alpha):
        return self.entries[float(alpha)]

    def to_dict(self):
        return {"kind": self.kind.to_dict(), "n": self.n, "replicates": self.replicates,
                "seed": self.seed, "entries": {repr(a): q for a, q in self.entries.items()}}

    @classmethod
    def from_dict(cls, d):
        return cls(StatisticKind.from_dict(d["kind"]), int(d["n"]), int(d["replicates"]),
                   int(d["seed"]), {float(a): float(q) for a, q in d["entries"].items()})


@dataclass(frozen=True)
class PowerEstimate:
    kind: StatisticKind
    alternative: AlternativeSpec | None
    n: int
    alpha: float
    critical_value_used: float
    rejection_rate: float
    mc_std_error: float
    replicates: int
    tuple_error: float | None = None

    def to_dict(self):
        return {"kind": self.kind.to_dict(),
                "alternative": None if self.alternative is None else self.alternative.to_dict(),
                "n": self.n, "alpha": self.alpha, "critical_value_used": self.critical_value_used,
                "rejection_rate": self.rejection_rate, "mc_std_error": self.mc_std_error,
                "replicates": self.replicates, "tuple_error": self.tuple_error}

    @classmethod
    def from_dict(cls, d):
        alt = d.get("alternative")
        return cls(StatisticKind.from_dict(d["kind"]),
                   None if alt is None else AlternativeSpec.from_dict(alt), int(d["n"]),
                   float(d["alpha"]), float(d["critical_value_used"]),
                   float(d["rejection_rate"]), float(d["mc_std_error"]), int(d["replicates"]),
                   d.get("tuple_error"))


# ---------------------------------------------------------------------------
# Simulation
# ---------------------------------------------------------------------------

def _run_block(config: MonteCarloConfig, start: int, stop: int):
    k = config.kind.k
    base = config.strategy
    m = stop - start
    ints = np.empty(m)
    kss = np.empty(m)
    err = None
    for i, r in enumerate(range(start, stop)):
        x = alternatives.sample(config.alternative, replicate_rng(config.seed, r), config.n)
        strategy = base
        if base.mode == "sampled":
            strategy = replace(base, seed=_replicate_tuple_seed(config.seed, r))
        ev = _evaluate(Sample(x), k, strategy)
        ints[i] = ev.integral
        kss[i] = ev.kolmogorov
        err = ev.tuple_error
    return start, ints, kss, err


def _blocks(reps: int, workers: int):
    size = max(1, math.ceil(reps / (4 * workers)))
    return [(a, min(a + size, reps)) for a in range(0, reps, size)]


def simulate(config: MonteCarloConfig, workers: int = 1) -> SimulationResult:
    """Simulate both statistics of order ``config.kind.k`` for every replicate."""
    reps = config.replicates
    ints = np.empty(reps)
    kss = np.empty(reps)
    err = None
    workers = max(1, int(workers))
    if workers == 1 or reps < 2:
        parts = [_run_block(config, 0, reps)]
    else:
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            futures = [pool.submit(_run_block, config, a, b) for a, b in _blocks(reps, workers)]
            parts = [f.result() for f in futures]
    for start, a, b, e in parts:
        ints[start:start + a.size] = a
        kss[start:start + b.size] = b
        err = e if e is not None else err
    for arr in (ints, kss):
        arr.setflags(write=False)
    return SimulationResult(config, ints, kss, err)


def simulate_null(config: MonteCarloConfig, workers: int = 1) -> np.ndarray:
    """Sorted null values of ``config.kind`` on unit exponential samples."""
    if config.alternative is not None:
        raise ParameterRangeError("simulate_null needs a config without an alternative")
    return np.sort(simulate(config, workers).values())


def upper_quantile(sorted_values: np.ndarray, alpha: float) -> float:
    """Order statistic ``ceil((1 - alpha) R)`` (1-based, at least 1) of ``R`` sorted values."""
    if not 0 < alpha <= 1:
        raise ParameterRangeError(f"alpha must lie in (0, 1], got {alpha!r}")
    reps = sorted_values.size
    # the small slack keeps (1 - 0.05) * 10000 from rounding up to 9501
    idx = max(1, math.ceil((1.0 - alpha) * reps - 1e-9))
    return float(sorted_values[idx - 1])


def critical_table(kind: StatisticKind, sorted_values: np.ndarray, config: MonteCarloConfig,
                   alphas=DEFAULT_ALPHAS) -> CriticalValueTable:
    entries = {float(a): upper_quantile(sorted_values, a) for a in alphas}
    return CriticalValueTable(kind, config.n, config.replicates, config.seed, entries)


def critical_values(config: MonteCarloConfig, alphas=DEFAULT_ALPHAS,
                    workers: int = 1) -> CriticalValueTable:
    """Empirical upper-alpha quantiles of the null distribution."""
    null = simulate_null(config.null(), workers)
    return critical_table(config.kind, null, config, alphas)


def power_from_values(kind: StatisticKind, values: np.ndarray, alpha: float,
                      critical_value: float, alternative: AlternativeSpec | None,
                      n: int, tuple_error: float | None = None) -> PowerEstimate:
    reps = values.size
    rate = float(np.count_nonzero(values > critical_value)) / reps
    se = math.sqrt(rate * (1.0 - rate) / reps)
    return PowerEstimate(kind, alternative, n, float(alpha), float(critical_value), rate, se,
                         reps, tuple_error)


def simulate_power(config: MonteCarloConfig, alpha: float, critical_value: float,
                   workers: int = 1) -> PowerEstimate:
    """Rejection rate of ``statistic > critical_value`` under ``config.alternative``."""
    sim = simulate(config, workers)
    return power_from_values(config.kind, sim.values(), alpha, critical_value,
                             config.alternative, config.n, sim.tuple_error)


# ---------------------------------------------------------------------------
# p-values
# ---------------------------------------------------------------------------

ASYMPTOTIC = "asymptotic"
MONTECARLO = "montecarlo"


def p_value(kind: StatisticKind, n: int, observed: float, method: str = ASYMPTOTIC,
            null_values: np.ndarray | None = None, replicates: int = 10_000,
            seed: int = 0, workers: int = 1) -> float:
    """Upper-tail p-value of an observed statistic.

    ``asymptotic`` uses the normal limit of ``sqrt(n) I`` (integral family
    only).  ``montecarlo`` returns ``(1 + #{null >= observed}) / (R + 1)``,
    simulating ``R = replicates`` null values unless ``null_values`` is given.
    """
    if method == ASYMPTOTIC:
        if kind.family is not Family.INTEGRAL:
            raise UnsupportedMethodError(
                "no closed-form null limit for the Kolmogorov statistic; use method='montecarlo'")
        sd = (kind.k + 1) * math.sqrt(kernels.variance_delta_sq(kind.k))
        return float(norm.sf(math.sqrt(n) * observed / sd))
    if method == MONTECARLO:
        if null_values is None:
            cfg = MonteCarloConfig(kind, n, replicates, seed)
            null_values = simulate(cfg, workers).values()
        null_values = np.asarray(null_values)
        return float(1 + np.count_nonzero(null_values >= observed)) / (null_values.size + 1)
    raise UnsupportedMethodError(f"unknown p-value method {method!r}")
