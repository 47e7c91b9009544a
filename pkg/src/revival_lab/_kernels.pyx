# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled phase sums.

Each output sample is an independent sequential loop over the weights in
the order given, so results do not depend on the thread count.
"""
import numpy as np
from cython.parallel cimport prange
from libc.math cimport sin, cos


def phase_sum(const double[::1] w, const double[::1] rate, const double[::1] t, int num_threads=1):
    """out[k] = sum_j w[j] * exp(-1j * t[k] * rate[j])"""
    cdef Py_ssize_t nt = t.shape[0]
    cdef Py_ssize_t nw = w.shape[0]
    cdef Py_ssize_t k, j
    cdef double sr, si, ph, tk
    if rate.shape[0] != nw:
        raise ValueError("weights and rates differ in length")
    re = np.empty(nt, dtype=np.float64)
    im = np.empty(nt, dtype=np.float64)
    cdef double[::1] ore = re
    cdef double[::1] oim = im
    if num_threads < 1:
        num_threads = 1
    for k in prange(nt, nogil=True, num_threads=num_threads, schedule="static"):
        sr = 0.0
        si = 0.0
        tk = t[k]
        for j in range(nw):
            ph = tk * rate[j]
            sr = sr + w[j] * cos(ph)
            si = si - w[j] * sin(ph)
        ore[k] = sr
        oim[k] = si
    return re + 1j * im


def phase_sum2(const double[::1] w, const double[::1] r1, const double[::1] r2,
               const double[::1] t1, const double[::1] t2, int num_threads=1):
    """out[k] = sum_j w[j] * exp(-1j * (t1[k] * r1[j] + t2[k] * r2[j]))"""
    cdef Py_ssize_t nt = t1.shape[0]
    cdef Py_ssize_t nw = w.shape[0]
    cdef Py_ssize_t k, j
    cdef double sr, si, ph, a, b
    if r1.shape[0] != nw or r2.shape[0] != nw:
        raise ValueError("weights and rates differ in length")
    if t2.shape[0] != nt:
        raise ValueError("time arrays differ in length")
    re = np.empty(nt, dtype=np.float64)
    im = np.empty(nt, dtype=np.float64)
    cdef double[::1] ore = re
    cdef double[::1] oim = im
    if num_threads < 1:
        num_threads = 1
    for k in prange(nt, nogil=True, num_threads=num_threads, schedule="static"):
        sr = 0.0
        si = 0.0
        a = t1[k]
        b = t2[k]
        for j in range(nw):
            ph = a * r1[j] + b * r2[j]
            sr = sr + w[j] * cos(ph)
            si = si - w[j] * sin(ph)
        ore[k] = sr
        oim[k] = si
    return re + 1j * im
