"""Pure-Python/numpy implementations of the hot kernels.

These are the fallback twins of the compiled routines in _kernels.pyx and
must produce bit-identical results; tests and the benchmark rely on that.
"""

from bisect import bisect_right

import numpy as np

IMPLEMENTATION = "python"


def encode_windows(ids, k, alphabet_size):
    """Keys of all overlapping k-windows of `ids`, big-endian base-A.

    Horner evaluation over the k window columns; the caller guarantees
    alphabet_size**k fits the 63-bit key budget.
    """
    n_windows = ids.shape[0] - k + 1
    a = np.uint64(alphabet_size)
    src = ids.astype(np.uint64)
    keys = np.zeros(n_windows, dtype=np.uint64)
    for j in range(k):
        keys = keys * a + src[j : j + n_windows]
    return keys


def markov_generate(cum_rows, init_cum, uniforms):
    """Sample a Markov path by inverse-CDF lookup on cumulative rows.

    State t is the first index whose cumulative probability exceeds
    uniforms[t] (bisect_right semantics), clamped to the last state to
    absorb cumulative sums that fall short of 1 by rounding.
    """
    n = uniforms.shape[0]
    a = cum_rows.shape[0]
    rows = [list(row) for row in cum_rows]
    init = list(init_cum)
    u = uniforms
    out = np.empty(n, dtype=np.int64)
    state = min(bisect_right(init, u[0]), a - 1)
    out[0] = state
    for t in range(1, n):
        state = min(bisect_right(rows[state], u[t]), a - 1)
        out[t] = state
    return out
