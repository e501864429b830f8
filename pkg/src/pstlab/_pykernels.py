"""Pure-Python kernels; the compiled ``_ckernels`` module mirrors these signatures."""
import math

import numpy as np

EPS = 2.0 ** -52


def tql_eigen(diag, offdiag, want_vectors=True, max_iter=None):
    """Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.

    Returns ``(eigenvalues, Z, info)`` with eigenvalues ascending and the
    eigenvectors in the columns of ``Z``.  ``info`` is 0 on success, else the
    1-based index of the eigenvalue that failed to converge.
    """
    n = len(diag)
    d = [float(x) for x in diag]
    e = [float(x) for x in offdiag] + [0.0]
    z = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)] if want_vectors else None
    budget = 50 * n if max_iter is None else max_iter
    used = 0
    for l in range(n):
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            used += 1
            if used > budget:
                return _finish(d, z, n), l + 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            underflow = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
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
                if z is not None:
                    for k in range(n):
                        row = z[k]
                        f = row[i + 1]
                        row[i + 1] = s * row[i] + c * f
                        row[i] = c * row[i] - s * f
                i -= 1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return _finish(d, z, n), 0


def _finish(d, z, n):
    order = sorted(range(n), key=d.__getitem__)
    vals = np.array([d[i] for i in order])
    if z is None:
        return vals, None
    vecs = np.array([[z[k][i] for i in order] for k in range(n)])
    return vals, vecs


def transfer_amplitudes(weights, eigenvalues, times):
    """Real and imaginary parts of sum_r w_r exp(i t alpha_r) at every time."""
    w = np.asarray(weights, dtype=float)
    a = np.asarray(eigenvalues, dtype=float)
    t = np.asarray(times, dtype=float)
    phase = np.multiply.outer(t, a)
    return np.cos(phase) @ w, np.sin(phase) @ w
