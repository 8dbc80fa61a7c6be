"""Samples, V-empirical distribution functions and the two test statistics.

For observations ``X_1..X_n`` and order ``k >= 2`` two V-empirical d.f.'s are
compared:

* ``H(t)``: fraction of ordered k-tuples whose maximum is below ``t``.  The
  indicator factors over the tuple, so ``H(t) = F_n(t) ** k``.
* ``G(t)``: fraction of ordered k-tuples (averaged over the k! assignments of
  divisors) whose weighted sum ``X_{i_1}/j_1 + ... + X_{i_k}/j_k`` is below
  ``t``.  Because the tuples range over all of ``[n]^k``, averaging over divisor
  permutations equals attaching the fixed divisors ``1..k``.

The integral statistic averages ``H - G`` over the data points; the Kolmogorov
statistic takes ``sup_t |H - G|``.  All indicators use strict ``<``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _counting
from .errors import (
    BudgetExceededError,
    InsufficientSampleError,
    InvalidOrderError,
    InvalidSampleError,
)

DEFAULT_BUDGET = 20_000_000
DEFAULT_SAMPLE_COUNT = 10_000_000

_SAMPLING_CHUNK = 1 << 20


@dataclass(frozen=True, eq=False)
class Sample:
    """Nonnegative observations stored sorted ascending (read-only)."""

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=np.float64).ravel()
        if arr.size == 0:
            raise InvalidSampleError("sample must contain at least one observation")
        if not np.all(np.isfinite(arr)):
            raise InvalidSampleError("sample contains non-finite values")
        if np.any(arr < 0):
            first = int(np.flatnonzero(arr < 0)[0])
            raise InvalidSampleError(
                f"negative observation {arr[first]!r} at position {first}; "
                "exponentiality tests require values >= 0")
        arr.sort()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self):
        return self.n

    def __eq__(self, other):
        return isinstance(other, Sample) and np.array_equal(self.values, other.values)

    def __hash__(self):
        return hash(self.values.tobytes())

    def scaled(self, c: float) -> "Sample":
        return Sample(self.values * c)

    @classmethod
    def coerce(cls, data) -> "Sample":
        return data if isinstance(data, cls) else cls(data)


class Family(str, enum.Enum):
    INTEGRAL = "integral"
    KOLMOGOROV = "kolmogorov"


@dataclass(frozen=True)
class StatisticKind:
    """Which statistic: the integral ``I_n^(k)`` or the Kolmogorov ``D_n^(k)``."""

    family: Family
    k: int

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        check_order(self.k)

    @classmethod
    def integral(cls, k: int) -> "StatisticKind":
        return cls(Family.INTEGRAL, k)

    @classmethod
    def kolmogorov(cls, k: int) -> "StatisticKind":
        return cls(Family.KOLMOGOROV, k)

    @property
    def label(self) -> str:
        letter = "I" if self.family is Family.INTEGRAL else "D"
        return f"{letter}^({self.k})"

    def to_dict(self):
        return {"family": self.family.value, "k": self.k}

    @classmethod
    def from_dict(cls, d):
        return cls(Family(d["family"]), int(d["k"]))


@dataclass(frozen=True)
class TupleStrategy:
    """How the weighted-sum d.f. is evaluated.

    ``exact`` counts all ``n ** k`` ordered tuples (refused above ``budget``);
    ``sampled`` draws ``sample_count`` uniform index tuples from a Philox stream
    keyed on ``seed``.
    """

    mode: str = "exact"
    budget: int = DEFAULT_BUDGET
    sample_count: int = DEFAULT_SAMPLE_COUNT
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("exact", "sampled"):
            raise ValueError(f"unknown tuple mode {self.mode!r}")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.mode == "sampled" and self.sample_count < 1:
            raise ValueError("sample_count must be >= 1 in sampled mode")

    @classmethod
    def exact(cls, budget: int = DEFAULT_BUDGET) -> "TupleStrategy":
        return cls("exact", budget=budget)

    @classmethod
    def sampled(cls, sample_count: int = DEFAULT_SAMPLE_COUNT, seed: int = 0) -> "TupleStrategy":
        return cls("sampled", sample_count=sample_count, seed=seed)


def default_strategy(n: int, k: int, seed: int = 0) -> TupleStrategy:
    """Exact whenever ``n ** k`` fits the default budget, otherwise 10^7 sampled tuples."""
    if n ** k <= DEFAULT_BUDGET:
        return TupleStrategy.exact()
    return TupleStrategy.sampled(DEFAULT_SAMPLE_COUNT, seed)


@dataclass(frozen=True)
class TestResult:
    """Outcome of applying one statistic to one sample."""

    __test__ = False  # not a pytest class

    kind: StatisticKind
    value: float
    n: int
    p_value: float | None = None
    p_method: str = "none"
    tuple_error: float | None = field(default=None)

    def to_dict(self):
        return {"kind": self.kind.to_dict(), "value": self.value, "n": self.n,
                "p_value": self.p_value, "p_method": self.p_method,
                "tuple_error": self.tuple_error}

    @classmethod
    def from_dict(cls, d):
        return cls(StatisticKind.from_dict(d["kind"]), float(d["value"]), int(d["n"]),
                   d.get("p_value"), d.get("p_method", "none"), d.get("tuple_error"))


def check_order(k) -> int:
    if int(k) != k or k < 2:
        raise InvalidOrderError(f"order k must be an integer >= 2, got {k!r}")
    return int(k)


def _resolve(sample, k, strategy):
    sample = Sample.coerce(sample)
    k = check_order(k)
    if strategy is None:
        strategy = default_strategy(sample.n, k)
    return sample, k, strategy


def _check_budget(n, k, strategy):
    if n ** k > strategy.budget:
        raise BudgetExceededError(
            f"exact enumeration needs n^k = {n}^{k} = {n ** k} tuples, above the "
            f"budget of {strategy.budget}; use TupleStrategy.sampled(...) or raise the budget")


def _tuple_stream(seed):
    return np.random.Generator(np.random.Philox(key=int(seed) & (2**128 - 1)))


def _sampled_sums(x, k, strategy):
    rng = _tuple_stream(strategy.seed)
    divisors = np.arange(1, k + 1, dtype=np.float64)
    out = np.empty(strategy.sample_count)
    for start in range(0, strategy.sample_count, _SAMPLING_CHUNK):
        m = min(_SAMPLING_CHUNK, strategy.sample_count - start)
        idx = rng.integers(0, x.size, size=(m, k))
        out[start:start + m] = (x[idx] / divisors).sum(axis=1)
    out.sort()
    return out


def weighted_sums(sample, k: int, strategy: TupleStrategy | None = None) -> np.ndarray:
    """Sorted multiset ``{sum_j X_{i_j} / j}`` over ordered index tuples.

    Exact mode returns all ``n ** k`` sums; sampled mode returns
    ``strategy.sample_count`` sums of uniformly drawn tuples.
    """
    sample, k, strategy = _resolve(sample, k, strategy)
    x = sample.values
    if strategy.mode == "sampled":
        return _sampled_sums(x, k, strategy)
    _check_budget(sample.n, k, strategy)
    sums = np.zeros(1)
    for j in range(1, k + 1):
        sums = (sums[:, None] + (x / j)[None, :]).ravel()
    sums.sort()
    return sums


def _sum_counts(x, k, queries, strategy):
    """Counts of weighted sums ``< q`` and ``<= q`` plus the tuple total."""
    if strategy.mode == "sampled":
        sums = _sampled_sums(x, k, strategy)
        return (np.searchsorted(sums, queries, "left"),
                np.searchsorted(sums, queries, "right"), float(sums.size))
    _check_budget(x.size, k, strategy)
    lt, le = _counting.weighted_sum_counts(x, k, queries)
    return lt, le, float(x.size) ** k


def empirical_cdf(sample, t: float) -> float:
    """``F_n(t) = #{X_i < t} / n`` (strict inequality, left-continuous)."""
    sample = Sample.coerce(sample)
    return float(np.searchsorted(sample.values, t, "left")) / sample.n


def max_vdf(sample, k: int, t: float) -> float:
    """``H_n^(k)(t)``, the V-empirical d.f. of maxima of k-tuples, as ``F_n(t) ** k``."""
    check_order(k)
    return empirical_cdf(sample, t) ** k


def sum_vdf(sample, k: int, t: float, strategy: TupleStrategy | None = None) -> float:
    """``G_n^(k)(t)``, the fraction of weighted sums strictly below ``t``."""
    sample, k, strategy = _resolve(sample, k, strategy)
    lt, _, total = _sum_counts(sample.values, k, np.array([float(t)]), strategy)
    return float(lt[0]) / total


@dataclass(frozen=True)
class _Evaluation:
    integral: float
    kolmogorov: float
    tuple_error: float | None


def _evaluate(sample, k, strategy) -> _Evaluation:
    x = sample.values
    n = sample.n
    v, mult = np.unique(x, return_counts=True)
    g_lt, g_le, total = _sum_counts(x, k, v, strategy)
    g_lt = g_lt / total
    g_le = g_le / total
    h_lt = (np.searchsorted(x, v, "left") / n) ** k
    h_le = (np.searchsorted(x, v, "right") / n) ** k
    integral = float(np.dot(mult, h_lt - g_lt)) / n
    # H - G is constant on (v_j, v_{j+1}] apart from G's rise, so the sup is
    # reached at a left value (< counts) or a right limit (<= counts).
    kolmogorov = float(max(np.max(np.abs(h_lt - g_lt)), np.max(np.abs(h_le - g_le))))
    err = None
    if strategy.mode == "sampled":
        err = 0.5 / math.sqrt(total)
    return _Evaluation(integral, kolmogorov, err)


def integral_statistic(sample, k: int, strategy: TupleStrategy | None = None) -> float:
    """``I_n^(k) = int (H - G) dF_n = (1/n) sum_i [H(X_i) - G(X_i)]``."""
    sample, k, strategy = _resolve(sample, k, strategy)
    return _evaluate(sample, k, strategy).integral


def ks_statistic(sample, k: int, strategy: TupleStrategy | None = None) -> float:
    """``D_n^(k) = sup_{t >= 0} |H(t) - G(t)|``, evaluated exactly over breakpoints."""
    sample, k, strategy = _resolve(sample, k, strategy)
    return _evaluate(sample, k, strategy).kolmogorov


def statistics(sample, k: int, strategy: TupleStrategy | None = None) -> tuple[float, float]:
    """Both ``(I_n^(k), D_n^(k))`` from a single pass over the tuple counts."""
    sample, k, strategy = _resolve(sample, k, strategy)
    ev = _evaluate(sample, k, strategy)
    return ev.integral, ev.kolmogorov


def evaluate(sample, kind: StatisticKind, strategy: TupleStrategy | None = None) -> TestResult:
    """Compute the statistic selected by ``kind`` and wrap it in a :class:`TestResult`."""
    sample, k, strategy = _resolve(sample, kind.k, strategy)
    ev = _evaluate(sample, k, strategy)
    value = ev.integral if kind.family is Family.INTEGRAL else ev.kolmogorov
    return TestResult(kind, value, sample.n, tuple_error=ev.tuple_error)


def u_integral_statistic(sample, k: int) -> float:
    """U-statistic version of ``I_n^(k)``: mean of the symmetric kernel over distinct (k+1)-subsets.

    Direct enumeration; meant for small samples.
    """
    from .kernels import kernel_psi

    sample = Sample.coerce(sample)
    k = check_order(k)
    if sample.n <= k:
        raise InsufficientSampleError(
            f"U-statistic of degree {k + 1} needs n >= {k + 1}, got n = {sample.n}")
    total = 0.0
    count = 0
    for subset in itertools.combinations(sample.values, k + 1):
        total += kernel_psi(k, subset)
        count += 1
    return total / count
