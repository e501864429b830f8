# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; signatures match ``_pykernels``."""
import numpy as np
cimport numpy as cnp
from libc.math cimport cos, sin, fabs, hypot, copysign

cnp.import_array()

cdef double EPS = 2.0 ** -52


def tql_eigen(diag, offdiag, bint want_vectors=True, max_iter=None):
    cdef Py_ssize_t n = len(diag)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] d_arr = np.array(diag, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] e_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] z_arr
    if n > 1:
        e_arr[: n - 1] = np.asarray(offdiag, dtype=np.float64)
    z_arr = np.eye(n, dtype=np.float64) if want_vectors else np.zeros((0, 0))
    cdef double[:] d = d_arr
    cdef double[:] e = e_arr
    cdef double[:, :] z = z_arr
    cdef long budget = 50 * n if max_iter is None else max_iter
    cdef long used = 0
    cdef Py_ssize_t l, m, i, k
    cdef double dd, g, r, s, c, p, f, b, zf
    cdef bint underflow
    cdef int info = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = fabs(d[m]) + fabs(d[m + 1])
                if fabs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            used += 1
            if used > budget:
                info = l + 1
                break
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if want_vectors:
                    for k in range(n):
                        zf = z[k, i + 1]
                        z[k, i + 1] = s * z[k, i] + c * zf
                        z[k, i] = c * z[k, i] - s * zf
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
        if info:
            break
    order = np.argsort(d_arr, kind="stable")
    vals = d_arr[order]
    vecs = z_arr[:, order] if want_vectors else None
    return (vals, vecs), info


def transfer_amplitudes(weights, eigenvalues, times):
    cdef double[:] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef double[:] a = np.ascontiguousarray(eigenvalues, dtype=np.float64)
    cdef double[:] t = np.ascontiguousarray(times, dtype=np.float64)
    cdef Py_ssize_t nt = t.shape[0], n = a.shape[0], i, r
    re_arr = np.zeros(nt, dtype=np.float64)
    im_arr = np.zeros(nt, dtype=np.float64)
    cdef double[:] re = re_arr
    cdef double[:] im = im_arr
    cdef double sr, si, ph
    for i in range(nt):
        sr = 0.0
        si = 0.0
        for r in range(n):
            ph = t[i] * a[r]
            sr += w[r] * cos(ph)
            si += w[r] * sin(ph)
        re[i] = sr
        im[i] = si
    return re_arr, im_arr
