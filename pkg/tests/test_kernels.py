import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pstlab import kernels

BACKENDS = kernels.backends()


@pytest.fixture(params=sorted(BACKENDS))
def impl(request):
    return BACKENDS[request.param]


def tridiag(d, e):
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


def test_compiled_backend_built():
    # the repo ships the extension; a missing build should be noticed, not silently skipped
    assert "cython" in BACKENDS


def test_selected_backend_is_listed():
    assert kernels.BACKEND in BACKENDS


class TestTql:
    def test_one_by_one(self, impl):
        (w, Z), info = impl.tql_eigen([2.5], [])
        assert info == 0 and w.tolist() == [2.5] and Z.tolist() == [[1.0]]

    def test_p2(self, impl):
        (w, Z), info = impl.tql_eigen([0.0, 0.0], [1.0])
        assert info == 0
        assert w == pytest.approx([-1, 1], abs=1e-15)
        assert np.abs(Z) == pytest.approx(np.full((2, 2), 2 ** -0.5), abs=1e-15)

    def test_values_only(self, impl):
        (w, Z), info = impl.tql_eigen([0.0, 0.0, 0.0], [1.0, 1.0], want_vectors=False)
        assert Z is None and w == pytest.approx([-2 ** 0.5, 0, 2 ** 0.5], abs=1e-14)

    def test_decoupled_blocks(self, impl):
        (w, _), info = impl.tql_eigen([3.0, 1.0, -2.0, 0.5], [0.0, 0.0, 0.0])
        assert info == 0 and w.tolist() == [-2.0, 0.5, 1.0, 3.0]

    def test_budget_exhausted(self, impl):
        rng = np.random.default_rng(5)
        _, info = impl.tql_eigen(rng.normal(size=8), rng.uniform(0.5, 1.5, size=7), max_iter=1)
        assert info > 0

    @given(st.integers(2, 30), st.integers(0, 2 ** 32 - 1))
    @settings(max_examples=100, deadline=None)
    def test_matches_numpy(self, n, seed):
        rng = np.random.default_rng(seed)
        d, e = rng.normal(size=n), rng.uniform(0.05, 3, size=n - 1)
        A = tridiag(d, e)
        for impl in BACKENDS.values():
            (w, Z), info = impl.tql_eigen(d, e)
            assert info == 0
            assert w == pytest.approx(np.linalg.eigvalsh(A), abs=1e-11)
            assert A @ Z == pytest.approx(Z * w, abs=1e-10)
            assert Z.T @ Z == pytest.approx(np.eye(n), abs=1e-12)

    def test_backends_agree(self):
        rng = np.random.default_rng(11)
        d, e = rng.normal(size=40), rng.uniform(0.1, 2, size=39)
        (wp, _), _ = BACKENDS["python"].tql_eigen(d, e)
        for impl in BACKENDS.values():
            (w, _), _ = impl.tql_eigen(d, e)
            assert w == pytest.approx(wp, abs=1e-12)


class TestTransferAmplitudes:
    def test_direct_sum(self, impl, rng):
        w, a, t = rng.uniform(-1, 1, 6), rng.normal(size=6), np.linspace(0, 10, 37)
        re, im = impl.transfer_amplitudes(w, a, t)
        z = np.exp(1j * np.outer(t, a)) @ w
        assert re == pytest.approx(z.real, abs=1e-13)
        assert im == pytest.approx(z.imag, abs=1e-13)

    def test_time_zero_is_weight_sum(self, impl):
        re, im = impl.transfer_amplitudes([0.25, -0.5, 0.25], [-1.0, 0.0, 1.0], [0.0])
        assert re.tolist() == [0.0] and im.tolist() == [0.0]

    def test_empty_grid(self, impl):
        re, im = impl.transfer_amplitudes([1.0], [1.0], [])
        assert len(re) == 0 and len(im) == 0
