"""Compiled counting kernels for weighted-sum empirical distribution functions.

The number of ordered index tuples whose weighted sum falls below a query is
computed by splitting the divisors ``1..k`` into a left and a right block,
enumerating partial sums for each block, and counting pairs ``l + r < q`` with
a two-pointer sweep.  Partial sums are accumulated in divisor order so that the
float value of ``l + r`` is the same left-to-right sum a direct enumeration
produces for ``k <= 3``.
"""

import numba
import numpy as np


@numba.njit(cache=True)
def pair_counts(left, right, queries):
    """Count pairs with ``left[i] + right[j]`` strictly below / not above each query.

    ``left`` and ``right`` must be sorted ascending.  Returns two int64 arrays
    ``(lt, le)`` aligned with ``queries``.
    """
    m = queries.shape[0]
    nl = left.shape[0]
    nr = right.shape[0]
    lt = np.zeros(m, np.int64)
    le = np.zeros(m, np.int64)
    for a in range(m):
        q = queries[a]
        j_lt = nr
        j_le = nr
        c_lt = 0
        c_le = 0
        for i in range(nl):
            li = left[i]
            while j_le > 0 and li + right[j_le - 1] > q:
                j_le -= 1
            if j_lt > j_le:
                j_lt = j_le
            while j_lt > 0 and li + right[j_lt - 1] >= q:
                j_lt -= 1
            if j_le == 0:
                break
            c_lt += j_lt
            c_le += j_le
        lt[a] = c_lt
        le[a] = c_le
    return lt, le


def partial_sums(x, divisors):
    """All ``len(x) ** len(divisors)`` sums ``sum_j x[i_j] / d_j``, sorted."""
    sums = np.zeros(1)
    for d in divisors:
        sums = (sums[:, None] + (x / d)[None, :]).ravel()
    sums.sort()
    return sums


def split_divisors(k):
    """Left/right divisor blocks that keep both partial-sum tables small."""
    if k == 2:
        return (1,), (2,)
    cut = (k + 1) // 2
    return tuple(range(1, cut + 1)), tuple(range(cut + 1, k + 1))


def weighted_sum_counts(x, k, queries):
    """Exact ``(lt, le)`` tuple counts for sorted data ``x`` at sorted ``queries``."""
    left_div, right_div = split_divisors(k)
    left = partial_sums(x, left_div)
    right = partial_sums(x, right_div)
    return pair_counts(left, right, np.ascontiguousarray(queries, dtype=np.float64))
