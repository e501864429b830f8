"""Spectral decomposition and continuous-time evolution e^{itH}.

Tridiagonal Hamiltonians go through the implicit-shift QL kernel; dense
symmetric matrices (trees, blocks) use cyclic Jacobi rotations.  Only the
phases e^{it alpha} are complex, and they are carried as (re, im) pairs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConvergenceFailure, EndpointPSTAbsent, NotAnEigenvalue
from .hamiltonian import PathHamiltonian, is_persymmetric
from .numbers import Time, parse_time
from .orthopoly import OrthoPolySeq

PST_TOL = 1e-9
PHASE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class EigenSystem:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns
    normalizers: np.ndarray  # kappa_r: squared first components

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class FidelityResult:
    pair: tuple
    time: float
    fidelity: float
    phase: complex | None = None


def _fix_signs(V: np.ndarray, first_row: bool) -> np.ndarray:
    V = V.copy()
    for r in range(V.shape[1]):
        col = V[:, r]
        pivot = col[0] if first_row and abs(col[0]) > 1e-14 else col[np.argmax(np.abs(col))]
        if pivot < 0:
            V[:, r] = -col
    return V


def jacobi_eigen(A, tol: float = 1e-15, max_sweeps: int | None = None):
    """Cyclic Jacobi for a dense symmetric matrix; returns (values, vectors) ascending."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    if not np.allclose(A, A.T, rtol=0, atol=1e-12 * max(1.0, np.abs(A).max())):
        raise ValueError("matrix is not symmetric")
    V = np.eye(n)
    sweeps = 50 * n if max_sweeps is None else max_sweeps
    scale = max(np.abs(A).max(), 1e-300)
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                A[p, q] = A[q, p] = 0.0
                vp = c * V[:, p] - s * V[:, q]
                vq = s * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = vp, vq
    else:
        raise ConvergenceFailure(f"Jacobi did not converge in {sweeps} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def _is_tridiagonal(A: np.ndarray) -> bool:
    n = A.shape[0]
    mask = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) > 1
    return not np.any(A[mask])


def _tql(d, e):
    (w, V), info = kernels.tql_eigen(np.asarray(d, dtype=float), np.asarray(e, dtype=float))
    if info:
        raise ConvergenceFailure(f"QL iteration stalled at eigenvalue {info}")
    return np.asarray(w), np.asarray(V)


def _mirror_eigen(q: np.ndarray, s: np.ndarray):
    """Eigenpairs of a mirror-symmetric tridiagonal matrix from its two half blocks.

    The antisymmetric block uses the top-left half with the middle coupling
    subtracted, the symmetric one adds it (even n) or borders the half with the
    centre vertex through sqrt(2) times the coupling (odd n).  Lifted vectors are
    exactly symmetric or antisymmetric, which a full solve cannot guarantee
    when the two families nearly collide.
    """
    n = len(q)
    m = n // 2
    d1, e1 = q[:m].copy(), s[: m - 1]
    if n % 2 == 0:
        d2 = d1.copy()
        d1[-1] -= s[m - 1]
        d2[-1] += s[m - 1]
        e2 = e1
    else:
        d2 = np.append(q[:m], q[m])
        e2 = np.append(e1, math.sqrt(2.0) * s[m - 1])
    w1, V1 = _tql(d1, e1)
    w2, V2 = _tql(d2, e2)
    half = 1.0 / math.sqrt(2.0)
    mid = np.zeros((n % 2, m))
    anti = np.vstack([V1, mid, -V1[::-1]]) * half
    if n % 2 == 0:
        sym = np.vstack([V2, V2[::-1]]) * half
    else:
        top = V2[:m]
        sym = np.vstack([top, math.sqrt(2.0) * V2[m:], top[::-1]]) * half
    w = np.concatenate([w1, w2])
    V = np.hstack([anti, sym])
    order = np.argsort(w, kind="stable")
    return w[order], V[:, order]


def eigensystem(h) -> EigenSystem:
    """Full spectral decomposition of a path Hamiltonian or dense symmetric matrix.

    Mirror-symmetric paths are split into two half-size blocks; other paths
    go straight to the QL kernel and dense input to Jacobi rotations.
    """
    if isinstance(h, PathHamiltonian):
        if is_persymmetric(h):
            w, V = _mirror_eigen(h.q_float(), h.offdiag())
        else:
            w, V = _tql(h.q_float(), h.offdiag())
        V = _fix_signs(V, first_row=True)
    else:
        A = np.asarray(h, dtype=float)
        if A.shape[0] > 1 and _is_tridiagonal(A) and np.all(np.diag(A, 1) != 0):
            w, V = _tql(np.diag(A), np.diag(A, 1))
            V = _fix_signs(V, first_row=True)
        else:
            w, V = jacobi_eigen(A)
            V = _fix_signs(V, first_row=False)
    return EigenSystem(eigenvalues=np.asarray(w), eigenvectors=V, normalizers=V[0, :] ** 2)


def eigenvector_from_polys(seq: OrthoPolySeq, alpha, tol: float = 1e-9) -> np.ndarray:
    """(d_1 p_0(alpha), ..., d_n p_{n-1}(alpha)): an unnormalized eigenvector."""
    pn = seq.monic[-1]
    x = float(alpha)
    residual = abs(float(pn(x)))
    size = sum(abs(float(c)) * abs(x) ** k for k, c in enumerate(pn.coeffs))
    if residual > tol * max(1.0, size):
        raise NotAnEigenvalue(f"{alpha} is not a root of p_n (|p_n| = {residual:.3g})")
    return np.array([float(seq.scalings[k]) * float(seq.monic[k](x)) for k in range(seq.n)])


def _as_system(h) -> EigenSystem:
    return h if isinstance(h, EigenSystem) else eigensystem(h)


def amplitude_weights(es: EigenSystem, j: int, k: int) -> np.ndarray:
    V = es.eigenvectors
    return V[j - 1, :] * V[k - 1, :]


def fidelities(h, j: int, k: int, times) -> np.ndarray:
    """|e_j^T e^{itH} e_k|^2 at each time (vertices are 1-based)."""
    es = _as_system(h)
    _check_pair(es.n, j, k)
    re, im = kernels.transfer_amplitudes(amplitude_weights(es, j, k), es.eigenvalues,
                                         np.asarray(times, dtype=float))
    return np.asarray(re) ** 2 + np.asarray(im) ** 2


def _seconds(t) -> float:
    return float(parse_time(t)) if isinstance(t, str) else float(t)


def _check_pair(n: int, j: int, k: int):
    if not (1 <= j <= n and 1 <= k <= n):
        raise ValueError(f"vertex pair ({j}, {k}) out of range 1..{n}")


def evolve_fidelity(h, j: int, k: int, t: Time) -> FidelityResult:
    es = _as_system(h)
    _check_pair(es.n, j, k)
    t = _seconds(t)
    re, im = kernels.transfer_amplitudes(amplitude_weights(es, j, k), es.eigenvalues, np.array([t]))
    re, im = float(re[0]), float(im[0])
    fid = re * re + im * im
    phase = None
    if fid > 1.0 - PHASE_THRESHOLD:
        mod = math.sqrt(fid)
        phase = complex(re / mod, im / mod)
    return FidelityResult(pair=(j, k), time=t, fidelity=fid, phase=phase)


def verify_pst(h, j: int, k: int, t: Time, tol: float = PST_TOL):
    """Returns ``(pst, FidelityResult)``; pst means fidelity >= 1 - tol."""
    res = evolve_fidelity(h, j, k, t)
    return res.fidelity >= 1.0 - tol, res


@dataclass(frozen=True)
class InternalPairReport:
    endpoint: FidelityResult
    pairs: tuple  # FidelityResult for j = 2..n-1
    all_pst: bool
    zero_entry_vertices: tuple  # vertices where some eigenvector vanishes


def verify_internal_pairs(h, t: Time, tol: float = PST_TOL) -> InternalPairReport:
    """Check transfer between every mirror pair (j, n+1-j) once the endpoints transfer."""
    es = _as_system(h)
    n = es.n
    ok, end = verify_pst(es, 1, n, t, tol)
    if not ok:
        raise EndpointPSTAbsent(f"no transfer between 1 and {n} at t = {_seconds(t)}")
    pairs = []
    good = True
    for j in range(2, n):
        pj, res = verify_pst(es, j, n + 1 - j, t, tol)
        good &= pj
        pairs.append(res)
    V = es.eigenvectors
    zeros = tuple(j + 1 for j in range(n) if np.any(np.abs(V[j, :]) <= 1e-10))
    return InternalPairReport(endpoint=end, pairs=tuple(pairs), all_pst=bool(good),
                              zero_entry_vertices=zeros)


@dataclass(frozen=True)
class FidelityTrace:
    pair: tuple
    times: np.ndarray
    fidelity: np.ndarray

    def to_csv(self) -> str:
        lines = ["t,fidelity"]
        lines += [f"{t:.17g},{f:.17g}" for t, f in zip(self.times, self.fidelity)]
        return "\n".join(lines) + "\n"

    def max(self) -> tuple[float, float]:
        i = int(np.argmax(self.fidelity))
        return float(self.times[i]), float(self.fidelity[i])


def fidelity_trace(h, j: int, k: int, t_max: Time, steps: int) -> FidelityTrace:
    if steps < 2:
        raise ValueError("steps must be at least 2")
    times = np.linspace(0.0, _seconds(t_max), int(steps))
    return FidelityTrace(pair=(j, k), times=times, fidelity=fidelities(h, j, k, times))


def unitary(h, t: Time) -> tuple[np.ndarray, np.ndarray]:
    """Real and imaginary parts of e^{itH} = V e^{itΛ} V^T."""
    es = _as_system(h)
    V, a = es.eigenvectors, es.eigenvalues
    t = _seconds(t)
    return (V * np.cos(t * a)) @ V.T, (V * np.sin(t * a)) @ V.T
