# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Mirrors ``_kernels_py`` operation for operation."""

import numpy as np

from libc.math cimport fabs, sqrt


cdef double _off_norm(double[:, ::1] a, Py_ssize_t n) nogil:
    cdef Py_ssize_t p, q
    cdef double acc = 0.0
    for p in range(n - 1):
        for q in range(p + 1, n):
            acc += a[p, q] * a[p, q]
    return sqrt(2.0 * acc)


def jacobi_eigh(a_in, double tol=1e-12, int max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps, off_norm)`` with
    eigenvectors stored as columns, in solver order (unsorted).
    """
    a_arr = np.array(a_in, dtype=np.float64, order="C", copy=True)
    cdef Py_ssize_t n = a_arr.shape[0]
    v_arr = np.eye(n, dtype=np.float64)
    cdef double[:, ::1] a = a_arr
    cdef double[:, ::1] v = v_arr
    cdef Py_ssize_t p, q, k
    cdef int sweep = 0
    cdef double off, apq, app, aqq, g, h, theta, t, c, s, akp, akq

    with nogil:
        off = _off_norm(a, n)
        while off >= tol and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if apq == 0.0:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    g = 100.0 * fabs(apq)
                    if sweep > 3 and fabs(app) + g == fabs(app) and fabs(aqq) + g == fabs(aqq):
                        a[p, q] = 0.0
                        a[q, p] = 0.0
                        continue
                    h = aqq - app
                    if fabs(h) + g == fabs(h):
                        t = apq / h
                    else:
                        theta = 0.5 * h / apq
                        t = 1.0 / (fabs(theta) + sqrt(1.0 + theta * theta))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = t * c
                    for k in range(n):
                        if k == p or k == q:
                            continue
                        akp = a[k, p]
                        akq = a[k, q]
                        a[k, p] = c * akp - s * akq
                        a[p, k] = a[k, p]
                        a[k, q] = s * akp + c * akq
                        a[q, k] = a[k, q]
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        akp = v[k, p]
                        akq = v[k, q]
                        v[k, p] = c * akp - s * akq
                        v[k, q] = s * akp + c * akq
            sweep += 1
            off = _off_norm(a, n)

    return np.diagonal(a_arr).copy(), v_arr, sweep, off


def slot_sums(const long long[::1] keys, const double[::1] values, Py_ssize_t nbins):
    """Per-bin sums and counts of ``values`` grouped by integer ``keys``."""
    sums_arr = np.zeros(nbins, dtype=np.float64)
    counts_arr = np.zeros(nbins, dtype=np.int64)
    cdef double[::1] sums = sums_arr
    cdef long long[::1] counts = counts_arr
    cdef Py_ssize_t i, n = keys.shape[0]
    cdef long long key
    with nogil:
        for i in range(n):
            key = keys[i]
            sums[key] += values[i]
            counts[key] += 1
    return sums_arr, counts_arr
