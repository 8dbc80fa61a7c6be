"""Numerical integration against the unit exponential weight and 1-D maximization.

Every integrand handled by the library is smooth on pieces of the half line
with kinks at known breakpoints (multiples of ``t`` for the Kolmogorov
projections) and at worst a logarithmic singularity at the origin.  Each piece
is integrated by double-exponential (tanh-sinh) quadrature, which is
vectorized over broadcast parameter arrays.
"""

import math

import numpy as np
from scipy.integrate import tanhsinh

from .errors import NumericFailureError

ATOL = 1e-15
RTOL = 1e-12
# pieces that miss the target but whose error estimate sits at roundoff level
# (e.g. an integral that is exactly zero) are accepted below this band
ACCEPT_ATOL = 1e-12
ACCEPT_RTOL = 1e-10


def integrate(f, a, b, args=(), atol=ATOL, rtol=RTOL):
    """Integrate ``f(x, *args)`` over ``[a, b]`` elementwise over broadcast limits/args.

    Pieces with ``a >= b`` contribute zero.
    """
    a, b, *args = np.broadcast_arrays(
        np.asarray(a, dtype=float), np.asarray(b, dtype=float),
        *[np.asarray(v, dtype=float) for v in args])
    out = np.zeros(a.shape)
    mask = b > a
    if not mask.any():
        return out
    res = tanhsinh(f, a[mask], b[mask], args=tuple(v[mask] for v in args),
                   atol=atol, rtol=rtol, maxlevel=14)
    ok = res.success | (res.error <= ACCEPT_ATOL + ACCEPT_RTOL * np.abs(res.integral))
    if not np.all(ok):
        bad = np.flatnonzero(~ok)
        raise NumericFailureError(
            f"tanh-sinh failed on {bad.size} of {res.success.size} pieces; "
            f"max error estimate {np.max(res.error[bad]):.3e}")
    out[mask] = res.integral
    return out


def half_line(f, breaks=(), args=(), atol=ATOL, rtol=RTOL):
    """``int_0^inf f(s, *args) ds`` split at ``breaks``, vectorized over broadcast args.

    ``breaks`` is a sequence of breakpoints (scalars or arrays broadcasting with
    ``args``) where the integrand may have kinks; they need not be sorted.
    A split at 1 is always added: an endpoint singularity on an infinite
    interval defeats the double-exponential map, a finite one does not.
    Returns a float when every input is scalar.
    """
    args = tuple(np.asarray(v, dtype=float) for v in args)
    breaks = (1.0, *breaks)
    shape = np.broadcast_shapes(*(np.shape(v) for v in args), *(np.shape(v) for v in breaks))
    edges = np.sort(np.stack([np.broadcast_to(np.asarray(v, dtype=float), shape)
                              for v in breaks]), axis=0)
    edges = np.clip(edges, 0.0, np.inf)
    bargs = tuple(np.broadcast_to(v, shape) for v in args)
    lo = np.zeros(shape)
    total = np.zeros(shape)
    for hi in edges:
        total += integrate(f, lo, hi, bargs, atol, rtol)
        lo = np.maximum(lo, hi)
    total += integrate(f, lo, np.inf, bargs, atol, rtol)
    return float(total) if total.ndim == 0 else total


def expect(f, breaks=(), args=(), atol=ATOL, rtol=RTOL):
    """``E f(X, *args)`` for ``X ~ Exp(1)``, i.e. ``int_0^inf f(s) e^{-s} ds``."""
    return half_line(lambda s, *p: f(s, *p) * np.exp(-s), breaks, args, atol, rtol)


INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(f, lo, hi, tol=1e-6, max_iter=200):
    """Maximize a unimodal scalar function on ``[lo, hi]`` by golden-section search.

    Returns ``(x, f(x))`` with the bracket narrowed below ``tol``.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
    x = 0.5 * (lo + hi)
    return x, f(x)


def grid_then_golden(fvec, lo=0.0, hi=20.0, step=0.01, tol=1e-6):
    """Global maximum of ``fvec`` on ``[lo, hi]``: coarse grid, then golden refinement.

    ``fvec`` must accept an array of points.  The refinement bracket is one grid
    step on each side of the best grid point.
    """
    grid = np.arange(lo, hi + 0.5 * step, step)
    values = np.asarray(fvec(grid))
    i = int(np.argmax(values))
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, grid.size - 1)]
    x, fx = golden_max(lambda t: float(fvec(np.array([t]))[0]), a, b, tol)
    if values[i] > fx:
        return float(grid[i]), float(values[i])
    return x, fx
