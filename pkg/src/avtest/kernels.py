"""Kernels, projections and null variances behind the asymptotic theory.

Under the unit exponential null:

* the integral statistic is a V-statistic of degree ``k + 1`` with symmetric
  kernel ``Psi_k``; its projection ``psi_k`` has variance ``Delta_k^2`` and
  ``sqrt(n) I_n^(k) -> N(0, (k+1)^2 Delta_k^2)``;
* for fixed ``t`` the difference ``H - G`` is a V-statistic of degree ``k``
  with kernel ``Xi_k(.; t)``; its projection ``xi_k(s; t)`` has variance
  ``delta_k^2(t)`` and the large-deviation rate of ``D_n^(k)`` is governed by
  ``sup_t delta_k^2(t)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import UnsupportedOrderError
from .quadrature import expect, grid_then_golden
from .sample import Family, StatisticKind, check_order

SUP_DOMAIN = (0.0, 20.0)
SUP_STEP = 0.01


def _expF(x):
    """Unit exponential d.f. ``1 - e^{-x}`` for ``x >= 0``."""
    return -np.expm1(-np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------
# Integral statistic: kernel Psi_k, projection psi_k, variance Delta_k^2
# ---------------------------------------------------------------------------

def kernel_psi(k: int, points) -> float:
    """Symmetrized kernel ``Psi_k`` evaluated literally on ``k + 1`` points."""
    k = check_order(k)
    pts = [float(p) for p in points]
    if len(pts) != k + 1:
        raise ValueError(f"kernel_psi of order {k} takes {k + 1} points, got {len(pts)}")
    perms = list(itertools.permutations(range(1, k + 1)))
    max_part = 0
    sum_part = 0
    for i, xi in enumerate(pts):
        others = pts[:i] + pts[i + 1:]
        max_part += max(others) < xi
        for perm in perms:
            acc = 0.0
            for x, j in zip(others, perm):
                acc += x / j
            sum_part += acc < xi
    return (max_part - sum_part / math.factorial(k)) / (k + 1)


def projection_psi(k: int, s):
    """``psi_k(s) = (1 - F(s)^k)/(k+1) - (k+1)^{-2} sum_r (1 + 1/r) e^{-s/r}``."""
    k = check_order(k)
    s = np.asarray(s, dtype=float)
    head = (1.0 - _expF(s) ** k) / (k + 1)
    tail = sum((1.0 + 1.0 / r) * np.exp(-s / r) for r in range(1, k + 1))
    out = head - tail / (k + 1) ** 2
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def delta_sq_fraction(k: int) -> Fraction:
    """``Delta_k^2 = Var psi_k(X)`` as an exact rational number."""
    k = check_order(k)
    poly = Fraction(-12 * k**4 - 38 * k**3 - 35 * k**2 - 11 * k,
                    4 * (k + 1) ** 2 * (k + 2) * (2 * k + 1))
    beta = Fraction(0)
    for r in range(1, k + 1):
        prod = Fraction(1)
        for m in range(2, k + 2):
            prod *= m + Fraction(1, r)
        beta += 1 / prod
    beta *= 2 * math.factorial(k)
    pairs = sum((Fraction(1, i + j + i * j)
                 for i in range(1, k + 1) for j in range(i + 1, k + 1)), Fraction(0))
    pairs *= Fraction(2, k + 1)
    return (poly + beta + pairs) / (k + 1) ** 3


def variance_delta_sq(k: int) -> float:
    """Projection variance ``Delta_k^2`` of the integral-statistic kernel."""
    return float(delta_sq_fraction(k))


def variance_delta_sq_quad(k: int) -> float:
    """``int_0^inf psi_k(s)^2 e^{-s} ds`` by quadrature (independent check)."""
    return expect(lambda s: projection_psi(k, s) ** 2)


# ---------------------------------------------------------------------------
# Kolmogorov statistic: kernel Xi_k, projection xi_k, variance delta_k^2(t)
# ---------------------------------------------------------------------------

def kernel_xi(k: int, points, t: float) -> float:
    """``Xi_k(x_1..x_k; t)``: max indicator minus the permutation-averaged sum indicator."""
    k = check_order(k)
    pts = [float(p) for p in points]
    if len(pts) != k:
        raise ValueError(f"kernel_xi of order {k} takes {k} points, got {len(pts)}")
    hits = 0
    for perm in itertools.permutations(range(1, k + 1)):
        acc = 0.0
        for x, j in zip(pts, perm):
            acc += x / j
        hits += acc < t
    return float(max(pts) < t) - hits / math.factorial(k)


@lru_cache(maxsize=None)
def _hypoexp_coefficients(k: int):
    """``c[j][i] = prod_{h != i, j} h / (h - i)`` for rates ``i != j`` in ``1..k``."""
    table = {}
    for j in range(1, k + 1):
        row = {}
        for i in range(1, k + 1):
            if i == j:
                continue
            c = Fraction(1)
            for h in range(1, k + 1):
                if h != i and h != j:
                    c *= Fraction(h, h - i)
            row[i] = float(c)
        table[j] = row
    return table


def _xi_general(k, s, t):
    # P(s/j + sum of the other X_m/j_m < t): the other terms are independent
    # exponentials with distinct rates, so their sum is hypoexponential.
    coef = _hypoexp_coefficients(k)
    out = np.where(s < t, _expF(t) ** (k - 1), 0.0)
    acc = np.zeros(np.broadcast(s, t).shape)
    for j in range(1, k + 1):
        y = t - s / j
        inside = s < j * t
        yc = np.where(inside, y, 0.0)
        tail = sum(c * np.exp(-i * yc) for i, c in coef[j].items())
        acc += np.where(inside, 1.0 - tail, 0.0)
    return out - acc / k


def _xi_2(s, t):
    a = s < t
    b = s < 2 * t
    return (np.where(a, _expF(t) - 0.5 * _expF(2 * np.where(a, t - s, 0.0)), 0.0)
            - np.where(b, 0.5 * _expF(np.where(b, t - s / 2, 0.0)), 0.0))


def _xi_3(s, t):
    a = s < t
    b = s < 2 * t
    c = s < 3 * t
    ya = np.where(a, t - s, 0.0)
    yb = np.where(b, t - s / 2, 0.0)
    yc = np.where(c, t - s / 3, 0.0)
    first = _expF(t) ** 2 - _expF(2 * ya) + 2.0 / 3.0 * _expF(3 * ya)
    second = 0.5 * _expF(yb) - _expF(3 * yb) / 6.0
    third = 2.0 / 3.0 * _expF(yc) - _expF(2 * yc) / 3.0
    return np.where(a, first, 0.0) - np.where(b, second, 0.0) - np.where(c, third, 0.0)


def projection_xi(k: int, s, t, general: bool = False):
    """``xi_k(s; t) = E[Xi_k(X_1..X_k; t) | X_1 = s]`` under the unit exponential.

    Closed forms serve ``k = 2, 3``; other orders (or ``general=True``) use the
    hypoexponential representation valid for every ``k``.
    """
    k = check_order(k)
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if general or k > 3:
        out = _xi_general(k, s, t)
    elif k == 2:
        out = _xi_2(s, t)
    else:
        out = _xi_3(s, t)
    return float(out) if out.ndim == 0 else out


# delta_k^2(t) = sum over terms (a + b t) exp(-c t), coefficients exact.
_F = Fraction
_DELTA_SQ_TERMS = {
    2: (
        (_F(1, 3), _F(0), _F(1)),
        (_F(-5, 4), _F(1, 2), _F(2)),
        (_F(-1, 3), _F(0), _F(3)),
        (_F(-1, 12), _F(0), _F(4)),
        (_F(-2, 3), _F(0), _F(3, 2)),
        (_F(2), _F(0), _F(5, 2)),
    ),
    3: (
        (_F(8, 15), _F(0), _F(1)),
        (_F(-1, 24), _F(1, 2), _F(2)),
        (_F(41, 9), _F(-4, 3), _F(3)),
        (_F(-179, 210), _F(0), _F(4)),
        (_F(113, 210), _F(0), _F(5)),
        (_F(-419, 2520), _F(0), _F(6)),
        (_F(-14, 15), _F(0), _F(3, 2)),
        (_F(122, 35), _F(0), _F(5, 2)),
        (_F(-2, 3), _F(0), _F(7, 2)),
        (_F(-2, 3), _F(0), _F(9, 2)),
        (_F(-5, 7), _F(0), _F(5, 3)),
        (_F(-5, 2), _F(0), _F(7, 3)),
        (_F(10, 7), _F(0), _F(8, 3)),
        (_F(-4), _F(0), _F(10, 3)),
        (_F(-2), _F(0), _F(11, 3)),
        (_F(2), _F(0), _F(13, 3)),
    ),
}


def delta_sq_quad(k: int, t):
    """``int_0^inf xi_k(s; t)^2 e^{-s} ds`` by quadrature, vectorized over ``t``."""
    k = check_order(k)
    t = np.asarray(t, dtype=float)
    return expect(lambda s, tt: projection_xi(k, s, tt) ** 2,
                  breaks=[j * t for j in range(1, k + 1)], args=(t,))


def delta_sq_of_t(k: int, t):
    """Variance ``delta_k^2(t)`` of the Kolmogorov projection at level ``t``.

    Exact closed forms for ``k = 2, 3``; quadrature of the general projection
    otherwise.
    """
    k = check_order(k)
    if k not in _DELTA_SQ_TERMS:
        return delta_sq_quad(k, t)
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    for a, b, c in _DELTA_SQ_TERMS[k]:
        out += (float(a) + float(b) * t) * np.exp(-float(c) * t)
    # exact cancellation at t = 0 leaves rounding noise of either sign
    out = np.where(t == 0, 0.0, out)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def sup_delta_sq(k: int) -> tuple[float, float]:
    """``(t*, sup_t delta_k^2(t))``: grid on [0, 20] at step 0.01, then golden section."""
    k = check_order(k)
    lo, hi = SUP_DOMAIN
    return grid_then_golden(lambda t: delta_sq_of_t(k, t), lo, hi, SUP_STEP, 1e-7)


# ---------------------------------------------------------------------------
# Null asymptotics summary
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NullAsymptotics:
    """Null-distribution constants for one statistic.

    ``ld_coefficient`` is the coefficient ``c`` in the small-``a`` expansion
    ``-lim n^{-1} log P(T_n > a) ~ c a^2``.
    """

    kind: StatisticKind
    projection_variance: float
    limit_scale: float
    ld_coefficient: float
    witness_t: float | None = None

    def to_dict(self):
        return {"kind": self.kind.to_dict(), "projection_variance": self.projection_variance,
                "limit_scale": self.limit_scale, "ld_coefficient": self.ld_coefficient,
                "witness_t": self.witness_t}


KOLMOGOROV_ORDERS = (2, 3)


def null_asymptotics(kind: StatisticKind) -> NullAsymptotics:
    """Projection variance, limit scale and large-deviation coefficient for ``kind``.

    For the integral family ``limit_scale`` is the variance of the normal limit
    of ``sqrt(n) I_n^(k)``.  For the Kolmogorov family it is ``k^2 sup delta_k^2``,
    the largest pointwise variance of the limiting process.
    """
    k = kind.k
    if kind.family is Family.INTEGRAL:
        var = delta_sq_fraction(k)
        scale = (k + 1) ** 2 * var
        return NullAsymptotics(kind, float(var), float(scale), float(1 / (2 * scale)))
    if k not in KOLMOGOROV_ORDERS:
        raise UnsupportedOrderError(
            f"Kolmogorov null asymptotics are available for k in {KOLMOGOROV_ORDERS}, got k = {k}")
    t_star, var = sup_delta_sq(k)
    scale = k * k * var
    return NullAsymptotics(kind, var, scale, 1.0 / (2.0 * scale), t_star)
