import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from pstlab.hamiltonian import PathHamiltonian


def krawtchouk(n: int) -> PathHamiltonian:
    """Weights sqrt(j(n-j)): end-to-end transfer at pi/2, eigenvalues -(n-1), -(n-3), ..., n-1."""
    return PathHamiltonian.from_r_squared("adjacency", [0] * n, [j * (n - j) for j in range(1, n)])


def unweighted(n: int) -> PathHamiltonian:
    return PathHamiltonian.adjacency([Fraction(1)] * (n - 1))


def dense(h: PathHamiltonian) -> np.ndarray:
    """Oracle matrix assembled independently of build_matrix."""
    A = np.diag(h.q_float())
    sign = -1.0 if h.kind.value == "laplacian" else 1.0
    for i, r in enumerate(h.r_float()):
        A[i, i + 1] = A[i + 1, i] = sign * r
    return A


def odd_gap_values(base: int, units: list[int]) -> list[Fraction]:
    vals = [Fraction(base)]
    for u in units:
        vals.append(vals[-1] + 2 * u + 1)
    return vals


@st.composite
def kay_spectra(draw, n_min=2, n_max=12):
    """Exact integer spectra whose gaps are odd (transfer at pi)."""
    n = draw(st.integers(n_min, n_max))
    base = draw(st.integers(-10, 10))
    units = draw(st.lists(st.integers(0, 4), min_size=n - 1, max_size=n - 1))
    return odd_gap_values(base, units)


@st.composite
def persymmetric_chains(draw, n_min=2, n_max=10, potentials=True):
    """Random mirror-symmetric chains with float weights in [0.3, 3]."""
    n = draw(st.integers(n_min, n_max))
    half_r = draw(st.lists(st.floats(0.3, 3.0), min_size=(n - 1 + 1) // 2, max_size=(n - 1 + 1) // 2))
    r = half_r + half_r[: (n - 1) // 2][::-1]
    if potentials:
        half_q = draw(st.lists(st.floats(-2.0, 2.0), min_size=(n + 1) // 2, max_size=(n + 1) // 2))
        q = half_q + half_q[: n // 2][::-1]
    else:
        q = [0.0] * n
    return PathHamiltonian("adjacency", tuple(q), tuple(r))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


SQRT2 = math.sqrt(2.0)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one verdict line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number, ok, detail):
        lines[number] = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(lines[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
