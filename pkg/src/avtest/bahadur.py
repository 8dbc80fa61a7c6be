"""Local Bahadur efficiency of the integral and Kolmogorov statistics.

For an alternative ``g(x, theta)`` with ``h = dg/dtheta`` at ``theta = 0``:

* integral statistic: ``I_n^(k) -> b(theta) ~ theta (k+1) int psi_k h`` and the
  local exact slope is ``b^2 / ((k+1)^2 Delta_k^2)``;
* Kolmogorov statistic: ``b(t, theta) ~ theta k int xi_k(.; t) h``, the limit is
  ``sup_t |b(t, theta)|`` and the slope is ``b^2 / (k^2 sup_t delta_k^2(t))``;
* twice the Kullback-Leibler distance to the exponential family behaves like
  ``theta^2 [int h^2 e^x - (int x h)^2]``.

Efficiency is the ratio of the two curvatures and never exceeds one.  The
alternatives reaching one (locally most favorable) have ``h`` proportional to
``e^{-x} psi_k`` or ``e^{-x} xi_k(.; t*)`` up to a scale-direction term.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from .alternatives import AltFamily, AlternativeSpec, kl_curvature_of, relative_derivative
from .errors import ParameterRangeError, UnsupportedOrderError
from .quadrature import expect, grid_then_golden, half_line
from .sample import Family, StatisticKind, check_order

EFFICIENCY_SLACK = 1e-6
MAX_SCAN_K = 30


@dataclass(frozen=True)
class Perturbation:
    """Direction ``h(x) = e^{-x} m(x)`` of a one-parameter departure from Exp(1)."""

    label: str
    m: Callable
    breaks: tuple = ()

    def h(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-x) * self.m(x)

    def shifted(self, c: float) -> "Perturbation":
        """Add ``c (x - 1) e^{-x}``, a pure change of scale."""
        m = self.m
        return Perturbation(f"{self.label}+{c:g}(x-1)", lambda x: m(x) + c * (x - 1.0), self.breaks)


def as_perturbation(family, beta: float = 3.0) -> Perturbation:
    if isinstance(family, Perturbation):
        return family
    if isinstance(family, AlternativeSpec):
        family, beta = family.family, family.beta
    family = AltFamily(family)
    label = f"EMNW({beta:g})" if family is AltFamily.EMNW else family.value.capitalize()
    return Perturbation(label, lambda x: relative_derivative(family, x, beta))


@dataclass(frozen=True)
class EfficiencyReport:
    kind: StatisticKind
    family: str
    slope_curvature: float
    kl_curvature: float
    efficiency: float
    b_coefficient: float
    witness_t: float | None = None

    def to_dict(self):
        return {"kind": self.kind.to_dict(), "family": self.family,
                "slope_curvature": self.slope_curvature, "kl_curvature": self.kl_curvature,
                "efficiency": self.efficiency, "b_coefficient": self.b_coefficient,
                "witness_t": self.witness_t}

    @classmethod
    def from_dict(cls, d):
        return cls(StatisticKind.from_dict(d["kind"]), d["family"], float(d["slope_curvature"]),
                   float(d["kl_curvature"]), float(d["efficiency"]), float(d["b_coefficient"]),
                   d.get("witness_t"))


# ---------------------------------------------------------------------------
# Integral statistic
# ---------------------------------------------------------------------------

def b_coefficient_integral(k: int, family, beta: float = 3.0) -> float:
    """``lim b_I(theta)/theta = (k+1) int psi_k(x) h(x) dx``."""
    k = check_order(k)
    p = as_perturbation(family, beta)
    return (k + 1) * expect(lambda s: kernels.projection_psi(k, s) * p.m(s), p.breaks)


def slope_curvature_integral(k: int, family, beta: float = 3.0) -> float:
    """``lim c_I(theta)/theta^2 = b^2 / ((k+1)^2 Delta_k^2)``."""
    b = b_coefficient_integral(k, family, beta)
    return b * b / ((k + 1) ** 2 * kernels.variance_delta_sq(k))


# ---------------------------------------------------------------------------
# Kolmogorov statistic
# ---------------------------------------------------------------------------

def b_function_ks(k: int, family, t, beta: float = 3.0):
    """``lim b_D(t, theta)/theta = k int xi_k(x; t) h(x) dx``, vectorized over ``t``."""
    k = check_order(k)
    p = as_perturbation(family, beta)
    t = np.asarray(t, dtype=float)
    breaks = [j * t for j in range(1, k + 1)] + list(p.breaks)
    val = expect(lambda s, tt: kernels.projection_xi(k, s, tt) * p.m(s), breaks, args=(t,))
    return k * val


def sup_b_ks(k: int, family, beta: float = 3.0) -> tuple[float, float]:
    """``(t*, sup_t |b_D(t)|)`` by a 0.01 grid on [0, 20] and golden-section refinement."""
    p = as_perturbation(family, beta)
    lo, hi = kernels.SUP_DOMAIN
    return grid_then_golden(lambda t: np.abs(b_function_ks(k, p, t)), lo, hi, kernels.SUP_STEP, tol=1e-9)


# ---------------------------------------------------------------------------
# Efficiency
# ---------------------------------------------------------------------------

def local_efficiency(kind: StatisticKind, family, beta: float = 3.0) -> EfficiencyReport:
    """Local Bahadur efficiency of ``kind`` against ``family``."""
    p = as_perturbation(family, beta)
    k = kind.k
    kl = kl_curvature_of(p.m, p.breaks)
    if kind.family is Family.INTEGRAL:
        b = b_coefficient_integral(k, p)
        slope = b * b / ((k + 1) ** 2 * kernels.variance_delta_sq(k))
        witness = None
    else:
        if k not in kernels.KOLMOGOROV_ORDERS:
            raise UnsupportedOrderError(
                f"Kolmogorov efficiency is available for k in {kernels.KOLMOGOROV_ORDERS}, got k = {k}")
        witness, b = sup_b_ks(k, p)
        _, dsq = kernels.sup_delta_sq(k)
        slope = b * b / (k * k * dsq)
    return EfficiencyReport(kind, p.label, slope, kl, slope / kl, b, witness)


def efficiency_by_k(family_kind: Family, family, k_values, beta: float = 3.0) -> dict[int, float]:
    """Efficiencies over a range of orders for one statistic family."""
    out = {}
    for k in k_values:
        out[int(k)] = local_efficiency(StatisticKind(family_kind, int(k)), family, beta).efficiency
    return out


def best_k_scan(kind: StatisticKind | Family, family, k_range=(2, 20),
                beta: float = 3.0) -> tuple[int, float]:
    """Order ``k`` in the inclusive ``k_range`` maximizing efficiency; ties go to the smaller ``k``."""
    fam = kind.family if isinstance(kind, StatisticKind) else Family(kind)
    lo, hi = int(k_range[0]), int(k_range[1])
    if lo < 2 or hi > MAX_SCAN_K or lo > hi:
        raise ValueError(f"k_range must lie within [2, {MAX_SCAN_K}], got {k_range!r}")
    effs = efficiency_by_k(fam, family, range(lo, hi + 1), beta)
    best = max(effs, key=lambda k: (effs[k], -k))
    return best, effs[best]


# ---------------------------------------------------------------------------
# Locally most favorable alternatives
# ---------------------------------------------------------------------------

def h0_transform(h: Callable, x, breaks=()):
    """``h0(x) = h(x) - (x - 1) e^{-x} int u h(u) du``: ``h`` with its scale component removed."""
    moment = half_line(lambda u: u * h(u), breaks)
    x = np.asarray(x, dtype=float)
    out = h(x) - (x - 1.0) * np.exp(-x) * moment
    return float(out) if np.ndim(out) == 0 else out


def h0_perturbation(family, beta: float = 3.0) -> Perturbation:
    """The perturbation with ``m0(x) = m(x) - (x - 1) E[X m(X)]``."""
    p = as_perturbation(family, beta)
    moment = expect(lambda s: s * p.m(s), p.breaks)
    return p.shifted(-moment)


def _lao_weight(kind: StatisticKind):
    k = kind.k
    if kind.family is Family.INTEGRAL:
        return (lambda x: kernels.projection_psi(k, x)), (), None
    if k not in kernels.KOLMOGOROV_ORDERS:
        raise UnsupportedOrderError(
            f"Kolmogorov most favorable alternatives need k in {kernels.KOLMOGOROV_ORDERS}, got {k}")
    t0, _ = kernels.sup_delta_sq(k)
    return (lambda x: kernels.projection_xi(k, x, t0)), tuple(j * t0 for j in range(1, k + 1)), t0


def _positivity_threshold(weight, breaks):
    grid = np.concatenate([np.linspace(0.0, 60.0, 60001), np.asarray(breaks, dtype=float),
                           np.nextafter(np.asarray(breaks, dtype=float), 0.0)])
    low = float(np.min(weight(grid)))
    return np.inf if low >= 0 else -1.0 / low


@dataclass(frozen=True)
class LaoDensity:
    """``g(x, theta) = e^{-x} (1 + theta w(x))`` with ``w = psi_k`` or ``xi_k(.; t*)``."""

    kind: StatisticKind
    theta: float
    max_theta: float
    witness_t: float | None
    weight: Callable
    breaks: tuple = ()

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, np.exp(-np.maximum(x, 0)) * (1.0 + self.theta * self.weight(x)), 0.0)
        return float(out) if out.ndim == 0 else out

    @property
    def perturbation(self) -> Perturbation:
        return Perturbation(f"LAO {self.kind.label}", self.weight, self.breaks)


def lao(kind: StatisticKind, theta: float) -> LaoDensity:
    """Most favorable alternative for ``kind`` at parameter ``theta``."""
    weight, breaks, t0 = _lao_weight(kind)
    limit = _positivity_threshold(weight, breaks)
    if theta < 0 or theta > limit:
        raise ParameterRangeError(
            f"theta = {theta:g} outside [0, {limit:.6g}] where the {kind.label} "
            "most favorable density stays nonnegative")
    return LaoDensity(kind, float(theta), limit, t0, weight, breaks)


def lao_density(kind: StatisticKind, theta: float, x):
    """Evaluate the most favorable density for ``kind`` at ``x``."""
    return lao(kind, theta)(x)
