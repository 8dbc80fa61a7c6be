"""Brute-force reference implementations used as test oracles.

Everything here enumerates tuples literally, with no counting tricks, so it
is only usable for tiny samples.
"""

import itertools
import math

import numpy as np

from avtest.kernels import kernel_psi


def literal_H(x, k, t):
    """Fraction of the ``n^k`` ordered tuples whose maximum is below ``t``."""
    hits = sum(max(tup) < t for tup in itertools.product(x, repeat=k))
    return hits / len(x) ** k


def literal_G(x, k, t):
    """``(n^k k!)^{-1}`` times the count over tuples and divisor permutations."""
    hits = 0
    for tup in itertools.product(x, repeat=k):
        for perm in itertools.permutations(range(1, k + 1)):
            acc = 0.0
            for v, j in zip(tup, perm):
                acc += v / j
            hits += acc < t
    return hits / (len(x) ** k * math.factorial(k))


def fixed_divisor_sums(x, k):
    """All ``n^k`` sums with divisors ``1..k`` accumulated left to right, sorted."""
    out = []
    for tup in itertools.product(x, repeat=k):
        acc = 0.0
        for j, v in enumerate(tup, 1):
            acc += v / j
        out.append(acc)
    return np.sort(np.array(out))


def v_integral_by_kernel(x, k):
    """``n^{-(k+1)}`` times the kernel summed over all ordered (k+1)-tuples."""
    total = 0.0
    for tup in itertools.product(x, repeat=k + 1):
        total += kernel_psi(k, tup)
    return total / len(x) ** (k + 1)


def ks_by_breakpoints(x, k):
    """``sup_t |H - G|`` from literal d.f.'s probed inside every constancy interval."""
    sums = fixed_divisor_sums(x, k)
    points = np.unique(np.concatenate([np.asarray(x, dtype=float), sums]))
    probes = list(points) + [points[-1] + 1.0]
    # right limits: halfway to the next breakpoint
    probes += list(0.5 * (points[:-1] + points[1:]))
    best = 0.0
    for t in probes:
        best = max(best, abs(literal_H(x, k, t) - literal_G(x, k, t)))
    return best
