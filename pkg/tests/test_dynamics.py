import math
from fractions import Fraction as F

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense, krawtchouk, persymmetric_chains, unweighted
from pstlab.dynamics import (
    eigensystem,
    eigenvector_from_polys,
    evolve_fidelity,
    fidelities,
    fidelity_trace,
    jacobi_eigen,
    unitary,
    verify_internal_pairs,
    verify_pst,
)
from pstlab.errors import EndpointPSTAbsent, NotAnEigenvalue
from pstlab.hamiltonian import PathHamiltonian, build_matrix
from pstlab.orthopoly import interpolate_signed, recurrence_forward

SQRT2 = math.sqrt(2)


def n4_chain():
    return PathHamiltonian.from_r_squared("adjacency", [0] * 4, [F(3, 4), 1, F(3, 4)])


class TestEigensystem:
    def test_p3(self):
        assert eigensystem(unweighted(3)).eigenvalues == pytest.approx([-SQRT2, 0, SQRT2], abs=1e-14)

    def test_dense_diagonal(self):
        es = eigensystem(np.diag([1.0, 2.0, 3.0]))
        assert es.eigenvalues.tolist() == [1.0, 2.0, 3.0]
        assert np.abs(es.eigenvectors).tolist() == np.eye(3).tolist()

    def test_krawtchouk_four(self):
        es = eigensystem(krawtchouk(4))
        assert es.eigenvalues == pytest.approx([-3, -1, 1, 3], abs=1e-12)

    def test_orthonormal_with_positive_first_row(self):
        es = eigensystem(krawtchouk(7))
        V = es.eigenvectors
        assert V.T @ V == pytest.approx(np.eye(7), abs=1e-12)
        assert np.all(V[0] > 0)
        assert es.normalizers.sum() == pytest.approx(1.0)

    def test_jacobi_dense(self, rng):
        A = rng.normal(size=(7, 7))
        A = A + A.T
        w, V = jacobi_eigen(A)
        assert w == pytest.approx(np.linalg.eigvalsh(A), abs=1e-12)
        assert A @ V == pytest.approx(V * w, abs=1e-11)

    def test_jacobi_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            jacobi_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))

    @given(persymmetric_chains(n_max=14))
    @settings(max_examples=100, deadline=None)
    def test_matches_numpy(self, h):
        A = dense(h)
        es = eigensystem(h)
        assert es.eigenvalues == pytest.approx(np.linalg.eigvalsh(A), abs=1e-11)
        V = es.eigenvectors
        assert A @ V == pytest.approx(V * es.eigenvalues, abs=1e-10)

    @given(persymmetric_chains(n_max=12))
    @settings(max_examples=200, deadline=None)
    def test_persymmetric_eigenvectors_symmetric_or_antisymmetric(self, h):
        V = eigensystem(h).eigenvectors
        for k in range(h.n):
            v = V[:, k]
            gap = min(np.linalg.norm(v - v[::-1]), np.linalg.norm(v + v[::-1]))
            assert gap <= 1e-8 * np.linalg.norm(v)


class TestEigenvectorFromPolys:
    def test_p2(self):
        seq = recurrence_forward([0, 0], [F(1)])
        v = eigenvector_from_polys(seq, 1)
        assert v / v[0] == pytest.approx([1, 1])

    def test_p3_zero(self):
        seq = recurrence_forward([0, 0, 0], [F(1), F(1)])
        v = eigenvector_from_polys(seq, 0)
        assert v / v[0] == pytest.approx([1, 0, -1])

    def test_weighted_p3(self):
        seq = recurrence_forward([0, 0, 0], r_sq=[2, 2])
        v = eigenvector_from_polys(seq, 2)
        assert v / v[0] == pytest.approx([1, SQRT2, 1])

    def test_not_an_eigenvalue(self):
        seq = recurrence_forward([0, 0], [F(1)])
        with pytest.raises(NotAnEigenvalue):
            eigenvector_from_polys(seq, 0.5)

    def test_last_entries_alternate(self):
        # on a mirror-symmetric chain the last eigenvector entry over the first is (-1)^(n+r)
        vals = [F(x) for x in (-5, -2, 1, 2, 7)]
        from pstlab.synthesis import jacobi_from_spectrum

        q, r_sq = jacobi_from_spectrum(vals)
        seq = recurrence_forward(q, r_sq=r_sq)
        pt = interpolate_signed(vals)
        for r, a in enumerate(vals, start=1):
            v = eigenvector_from_polys(seq, a)
            assert v[-1] / v[0] == pytest.approx((-1) ** (5 + r))
            assert pt(a) == (-1) ** (5 + r)


class TestEvolution:
    def test_p2_half_pi(self):
        assert evolve_fidelity(unweighted(2), 1, 2, math.pi / 2).fidelity == pytest.approx(1.0)

    def test_p3(self):
        res = evolve_fidelity(unweighted(3), 1, 3, math.pi / SQRT2)
        assert res.fidelity == pytest.approx(1.0, abs=1e-12)
        assert abs(res.phase) == pytest.approx(1.0)

    def test_n4(self):
        assert evolve_fidelity(n4_chain(), 1, 4, "pi").fidelity == pytest.approx(1.0, abs=1e-12)

    def test_against_expm(self, rng):
        h = PathHamiltonian("adjacency", tuple(rng.normal(size=6)), tuple(rng.uniform(0.5, 2, size=5)))
        U = scipy.linalg.expm(1j * 1.7 * build_matrix(h))
        for j, k in ((1, 6), (2, 5), (3, 3)):
            assert evolve_fidelity(h, j, k, 1.7).fidelity == pytest.approx(abs(U[j - 1, k - 1]) ** 2, abs=1e-12)
        re, im = unitary(h, 1.7)
        assert re + 1j * im == pytest.approx(U, abs=1e-12)

    def test_pair_out_of_range(self):
        with pytest.raises(ValueError):
            evolve_fidelity(unweighted(3), 0, 3, 1.0)

    @given(persymmetric_chains(n_max=10), st.floats(0, 50), st.data())
    @settings(max_examples=200, deadline=None)
    def test_unitarity_and_symmetry(self, h, t, data):
        j = data.draw(st.integers(1, h.n))
        k = data.draw(st.integers(1, h.n))
        row = sum(evolve_fidelity(h, j, m, t).fidelity for m in range(1, h.n + 1))
        assert row == pytest.approx(1.0, abs=1e-10)
        assert evolve_fidelity(h, j, k, t).fidelity == pytest.approx(
            evolve_fidelity(h, k, j, t).fidelity, abs=1e-12)


class TestVerify:
    def test_krawtchouk_twelve(self):
        ok, res = verify_pst(krawtchouk(12), 1, 12, "pi/2")
        assert ok and res.fidelity >= 1 - 1e-9

    def test_p4_never(self):
        times = np.arange(0, 20 * math.pi, 1e-3)
        assert not any(verify_pst(unweighted(4), 1, 4, t)[0] for t in times[::50])
        assert fidelities(unweighted(4), 1, 4, times).max() < 1 - 1e-9

    def test_p4_comes_close(self):
        # eigenvalues +-phi, +-1/phi are rationally independent, so the fidelity gets
        # arbitrarily close to 1; expm confirms 0.99991 near t = 53.389
        A = np.diag(np.ones(3), 1)
        A = A + A.T
        t = 53.389
        oracle = abs(scipy.linalg.expm(1j * t * A)[0, 3]) ** 2
        assert oracle == pytest.approx(0.9999144291896838, abs=1e-12)
        assert evolve_fidelity(unweighted(4), 1, 4, t).fidelity == pytest.approx(oracle, abs=1e-12)

    def test_laplacian_p2(self):
        ok, _ = verify_pst(PathHamiltonian.laplacian([F(1, 2)]), 1, 2, "pi")
        assert ok

    def test_internal_pairs_krawtchouk_five(self):
        rep = verify_internal_pairs(krawtchouk(5), "pi/2")
        assert [r.pair for r in rep.pairs] == [(2, 4), (3, 3), (4, 2)]
        assert all(r.fidelity == pytest.approx(1.0, abs=1e-12) for r in rep.pairs)
        assert rep.all_pst

    def test_internal_pairs_n4(self):
        rep = verify_internal_pairs(n4_chain(), "pi")
        assert rep.pairs[0].pair == (2, 3)
        assert rep.pairs[0].fidelity == pytest.approx(1.0, abs=1e-12)
        assert rep.zero_entry_vertices == ()

    def test_internal_pairs_three(self):
        h = PathHamiltonian.from_r_squared("adjacency", [0] * 3, [2, 2])
        # eigenvalues -2, 0, 2: the transfer time is pi/2 (at pi the evolution is the identity)
        rep = verify_internal_pairs(h, "pi/2")
        assert rep.pairs[0].pair == (2, 2) and rep.all_pst
        # the middle entry of the antisymmetric eigenvector vanishes; reported, not interpreted
        assert rep.zero_entry_vertices == (2,)

    def test_requires_endpoint_transfer(self):
        with pytest.raises(EndpointPSTAbsent):
            verify_internal_pairs(unweighted(4), "pi")


class TestTrace:
    def test_p2(self):
        tr = fidelity_trace(unweighted(2), 1, 2, "pi", 5)
        assert tr.fidelity == pytest.approx([0, 0.5, 1, 0.5, 0], abs=1e-14)
        csv = tr.to_csv().splitlines()
        assert csv[0] == "t,fidelity" and len(csv) == 6
        assert csv[1] == "0,0"

    def test_self_transfer_starts_at_one(self):
        tr = fidelity_trace(krawtchouk(6), 3, 3, 5.0, 3)
        assert tr.fidelity[0] == pytest.approx(1.0)

    def test_p3_peak_at_midpoint(self):
        tr = fidelity_trace(unweighted(3), 1, 3, 2 * math.pi / SQRT2, 101)
        t, f = tr.max()
        assert t == pytest.approx(math.pi / SQRT2) and f == pytest.approx(1.0)

    def test_steps(self):
        with pytest.raises(ValueError):
            fidelity_trace(unweighted(2), 1, 2, 1.0, 1)
