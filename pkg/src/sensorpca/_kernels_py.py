"""Pure numpy implementations of the compiled kernels in ``_kernels.pyx``."""

import math

import numpy as np


def _off_norm(a):
    upper = np.triu(a, 1)
    return math.sqrt(2.0 * float(np.sum(upper * upper)))


def jacobi_eigh(a_in, tol=1e-12, max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps, off_norm)`` with
    eigenvectors stored as columns, in solver order (unsorted).
    """
    a = np.array(a_in, dtype=np.float64, order="C", copy=True)
    n = a.shape[0]
    v = np.eye(n)
    sweep = 0
    off = _off_norm(a)
    while off >= tol and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                g = 100.0 * abs(apq)
                if sweep > 3 and abs(app) + g == abs(app) and abs(aqq) + g == abs(aqq):
                    a[p, q] = a[q, p] = 0.0
                    continue
                h = aqq - app
                if abs(h) + g == abs(h):
                    t = apq / h
                else:
                    theta = 0.5 * h / apq
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                new_p = c * col_p - s * col_q
                new_q = s * col_p + c * col_q
                a[:, p] = new_p
                a[p, :] = new_p
                a[:, q] = new_q
                a[q, :] = new_q
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
        sweep += 1
        off = _off_norm(a)
    return np.diagonal(a).copy(), v, sweep, off


def slot_sums(keys, values, nbins):
    """Per-bin sums and counts of ``values`` grouped by integer ``keys``."""
    keys = np.asarray(keys, dtype=np.int64)
    sums = np.bincount(keys, weights=np.asarray(values, dtype=np.float64), minlength=nbins)
    counts = np.bincount(keys, minlength=nbins).astype(np.int64)
    return sums, counts
