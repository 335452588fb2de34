# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror ``_kernels_py``."""

import numpy as np

cdef enum:
    NSTATES = 4


def count_pairs(const long long[::1] codes, Py_ssize_t start, Py_ssize_t stop):
    """Count transitions codes[t] -> codes[t+1] for start <= t < stop."""
    cdef Py_ssize_t n = codes.shape[0]
    cdef Py_ssize_t t
    out = np.zeros((NSTATES, NSTATES), dtype=np.int64)
    cdef long long[:, ::1] c = out
    if start < 0:
        start = 0
    if stop > n - 1:
        stop = n - 1
    for t in range(start, stop):
        c[codes[t] - 1, codes[t + 1] - 1] += 1
    return out


def sample_path(const double[:, :, ::1] cumprobs, const Py_ssize_t[::1] step_segment,
                const double[::1] uniforms, long long initial):
    """Draw a state path; step k moves slot k to k+1 using matrix step_segment[k]."""
    cdef Py_ssize_t n = step_segment.shape[0] + 1
    cdef Py_ssize_t k, j
    cdef long long cur = initial
    cdef double total, u
    out = np.empty(n, dtype=np.int64)
    cdef long long[::1] path = out
    path[0] = cur
    for k in range(n - 1):
        total = cumprobs[step_segment[k], cur - 1, NSTATES - 1]
        if total > 0.0:
            u = uniforms[k] * total
            j = 0
            while j < NSTATES - 1 and u >= cumprobs[step_segment[k], cur - 1, j]:
                j += 1
            cur = j + 1
        path[k + 1] = cur
    return out
