"""Scale-free exponentiality tests comparing maxima of k-tuples with weighted sums.

Under exponentiality ``max(X_1, ..., X_k)`` and ``X_1 + X_2/2 + ... + X_k/k``
have the same law.  The package compares the empirical distribution of maxima
with the empirical distribution of weighted sums over all ordered k-tuples,
through an integral statistic ``I`` and a Kolmogorov statistic ``D``, and
provides their null asymptotics, local Bahadur efficiencies, most favorable
alternatives and a seeded Monte Carlo engine.
"""

from .alternatives import AltFamily, AlternativeSpec
from .bahadur import (EfficiencyReport, LaoDensity, Perturbation, b_coefficient_integral,
                      b_function_ks, best_k_scan, h0_transform, lao, lao_density,
                      local_efficiency, slope_curvature_integral, sup_b_ks)
from .errors import (AVTestError, BudgetExceededError, InsufficientSampleError,
                     InvalidOrderError, InvalidSampleError, NumericFailureError,
                     ParameterRangeError, UnsupportedMethodError, UnsupportedOrderError)
from .kernels import (NullAsymptotics, delta_sq_of_t, kernel_psi, kernel_xi, null_asymptotics,
                      projection_psi, projection_xi, sup_delta_sq, variance_delta_sq)
from .montecarlo import (CriticalValueTable, MonteCarloConfig, PowerEstimate, critical_values,
                         p_value, simulate, simulate_null, simulate_power)
from .sample import (Family, Sample, StatisticKind, TestResult, TupleStrategy, evaluate,
                     integral_statistic, ks_statistic, statistics, u_integral_statistic)

__all__ = [
    "AltFamily", "AlternativeSpec", "EfficiencyReport", "LaoDensity", "Perturbation",
    "b_coefficient_integral", "b_function_ks", "best_k_scan", "h0_transform", "lao",
    "lao_density", "local_efficiency", "slope_curvature_integral", "sup_b_ks",
    "AVTestError", "BudgetExceededError", "InsufficientSampleError", "InvalidOrderError",
    "InvalidSampleError", "NumericFailureError", "ParameterRangeError",
    "UnsupportedMethodError", "UnsupportedOrderError", "NullAsymptotics", "delta_sq_of_t",
    "kernel_psi", "kernel_xi", "null_asymptotics", "projection_psi", "projection_xi",
    "sup_delta_sq", "variance_delta_sq", "CriticalValueTable", "MonteCarloConfig",
    "PowerEstimate", "critical_values", "p_value", "simulate", "simulate_null",
    "simulate_power", "Family", "Sample", "StatisticKind", "TestResult", "TupleStrategy",
    "evaluate", "integral_statistic", "ks_statistic", "statistics", "u_integral_statistic",
]
