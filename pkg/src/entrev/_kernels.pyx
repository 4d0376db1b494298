# Compiled twins of _kernels_py. Same inputs, bit-identical outputs.

import numpy as np

cimport numpy as cnp

cnp.import_array()

IMPLEMENTATION = "cython"


def encode_windows(ids, int k, int alphabet_size):
    cdef const cnp.int64_t[::1] src = np.ascontiguousarray(ids, dtype=np.int64)
    cdef Py_ssize_t n_windows = src.shape[0] - k + 1
    cdef cnp.uint64_t[::1] keys = np.empty(n_windows, dtype=np.uint64)
    cdef cnp.uint64_t a = <cnp.uint64_t> alphabet_size
    cdef cnp.uint64_t top = 1
    cdef cnp.uint64_t key = 0
    cdef Py_ssize_t i, j

    for j in range(k - 1):
        top *= a
    for j in range(k):
        key = key * a + <cnp.uint64_t> src[j]
    keys[0] = key
    # rolling update: drop the leading digit, shift, append the next symbol
    for i in range(1, n_windows):
        key = (key - (<cnp.uint64_t> src[i - 1]) * top) * a + <cnp.uint64_t> src[i + k - 1]
        keys[i] = key
    return np.asarray(keys)


cdef inline Py_ssize_t _bisect_right(const double* row, Py_ssize_t n, double u) noexcept nogil:
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = n
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if u < row[mid]:
            hi = mid
        else:
            lo = mid + 1
    return lo


def markov_generate(cum_rows, init_cum, uniforms):
    cdef const cnp.float64_t[:, ::1] rows = np.ascontiguousarray(cum_rows, dtype=np.float64)
    cdef const cnp.float64_t[::1] init = np.ascontiguousarray(init_cum, dtype=np.float64)
    cdef const cnp.float64_t[::1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t n = u.shape[0]
    cdef Py_ssize_t a = rows.shape[0]
    cdef cnp.int64_t[::1] out = np.empty(n, dtype=np.int64)
    cdef Py_ssize_t state, t

    with nogil:
        state = _bisect_right(&init[0], a, u[0])
        if state > a - 1:
            state = a - 1
        out[0] = state
        for t in range(1, n):
            state = _bisect_right(&rows[state, 0], a, u[t])
            if state > a - 1:
                state = a - 1
            out[t] = state
    return np.asarray(out)
