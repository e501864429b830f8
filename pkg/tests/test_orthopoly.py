from fractions import Fraction as F

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import kay_spectra
from pstlab.errors import DegenerateInterpolation, DegreeDrop, NegativeWeightSquared, NonPositiveOffdiag
from pstlab.orthopoly import (
    Poly,
    euclidean_step,
    float_poly,
    from_roots,
    interpolate_signed,
    jacobi_from_polys,
    recurrence_forward,
    roots_close,
)


def P(*coeffs):
    """Polynomial from coefficients given highest degree first."""
    return Poly([F(c) for c in reversed(coeffs)])


class TestPoly:
    def test_strip_and_degree(self):
        assert Poly([F(1), F(0), F(0)]).degree == 0
        assert Poly([]).degree == -1

    def test_arithmetic(self):
        a, b = P(1, 0, -1), P(1, 1)
        assert a * b == P(1, 1, -1, -1)
        assert a - b == P(1, -1, -2)
        assert a(F(3)) == 8

    def test_deflate(self):
        assert P(1, -6, 11, -6).deflate(F(1)) == P(1, -5, 6)

    def test_monic(self):
        assert P(2, 4).monic() == P(1, 2)


class TestRecurrence:
    def test_p2(self):
        seq = recurrence_forward([0, 0], [F(1)])
        assert seq.monic[2] == P(1, 0, -1)

    def test_p3_unweighted(self):
        seq = recurrence_forward([0, 0, 0], [F(1), F(1)])
        assert seq.monic[3] == P(1, 0, -2, 0)

    def test_krawtchouk_four(self):
        seq = recurrence_forward([0] * 4, r_sq=[3, 4, 3])
        assert seq.monic[4] == from_roots([F(-3), F(-1), F(1), F(3)])
        # cross-check the float route against numpy's root finder
        fseq = recurrence_forward([0.0] * 4, [3 ** 0.5, 2.0, 3 ** 0.5])
        roots = np.sort(np.roots([float(c) for c in reversed(fseq.monic[4].coeffs)]).real)
        assert roots == pytest.approx([-3, -1, 1, 3], abs=1e-10)

    def test_scalings(self):
        seq = recurrence_forward([0, 0, 0], r_sq=[2, 2])
        assert [float(d) for d in seq.scalings] == pytest.approx([1, 2 ** -0.5, 0.5])
        lap = recurrence_forward([F(1, 2)] * 2, r_sq=[F(1, 4)], kind="laplacian")
        assert list(lap.scalings) == [1, -2]

    def test_non_positive(self):
        with pytest.raises(NonPositiveOffdiag):
            recurrence_forward([0, 0], [0])


class TestFromRoots:
    def test_examples(self):
        assert from_roots([F(-1), F(1)]) == P(1, 0, -1)
        assert from_roots([F(x) for x in (-4, -2, 0, 2, 4)]) == P(1, 0, -20, 0, 64, 0)
        assert from_roots([F(1), F(2), F(3)]) == P(1, -6, 11, -6)


class TestInterpolateSigned:
    def test_five_vertex(self):
        got = interpolate_signed([F(x) for x in (-4, -2, 0, 2, 4)])
        assert got == P(F(1, 24), 0, F(-2, 3), 0, 1)

    def test_two(self):
        assert interpolate_signed([F(-1), F(1)]) == P(1, 0)

    def test_four_against_vandermonde(self):
        roots = [1, 2, 3, 4]
        # oracle: exact solve of the Vandermonde system for values (-1, 1, -1, 1)
        V = sympy.Matrix([[sympy.Integer(a) ** k for k in range(4)] for a in roots])
        c = V.LUsolve(sympy.Matrix([-1, 1, -1, 1]))
        expected = Poly([F(int(x.p), int(x.q)) for x in c])
        assert expected == P(F(4, 3), -10, F(68, 3), -15)
        assert interpolate_signed([F(a) for a in roots]) == expected

    @given(kay_spectra())
    def test_alternates_exactly(self, values):
        p = interpolate_signed(values)
        n = len(values)
        assert [p(a) for a in values] == [(-1) ** (n + r) for r in range(1, n + 1)]

    def test_degenerate(self):
        with pytest.raises((DegenerateInterpolation, ZeroDivisionError)):
            interpolate_signed([F(1), F(1)])


class TestEuclideanStep:
    def test_five_vertex(self):
        q, r_sq, rest = euclidean_step(P(1, 0, -20, 0, 64, 0), P(1, 0, -16, 0, 24))
        assert (q, r_sq) == (0, 4)
        assert rest == P(1, 0, -10, 0)

    def test_two_by_two(self):
        q, r_sq, rest = euclidean_step(P(1, 0, -1), P(1, 0))
        assert (q, r_sq, rest) == (0, 1, P(1))

    def test_four(self):
        q, r_sq, rest = euclidean_step(P(1, 0, -16, 0, 24), P(1, 0, -10, 0))
        assert (q, r_sq, rest) == (0, 6, P(1, 0, -4))

    def test_last_step(self):
        q, r_sq, rest = euclidean_step(P(1, -3), P(1))
        assert q == 3 and r_sq is None and rest is None

    def test_negative_weight(self):
        # x^2 - 4x + 7 = (x - 2)(x - 2) + 3, so r^2 = -3
        with pytest.raises(NegativeWeightSquared):
            euclidean_step(P(1, -4, 7), P(1, -2))

    def test_degree_drop(self):
        with pytest.raises(DegreeDrop):
            euclidean_step(P(1, -3, 2), P(1, -1))


@st.composite
def jacobi_data(draw, n_max=9):
    n = draw(st.integers(2, n_max))
    q = draw(st.lists(st.fractions(-5, 5, max_denominator=7), min_size=n, max_size=n))
    r_sq = draw(st.lists(st.fractions(F(1, 5), 6, max_denominator=7), min_size=n - 1, max_size=n - 1))
    return q, r_sq


class TestRoundTrip:
    @given(jacobi_data())
    @settings(max_examples=60, deadline=None)
    def test_exact(self, data):
        q, r_sq = data
        seq = recurrence_forward(q, r_sq=r_sq)
        assert jacobi_from_polys(seq.monic[-1], seq.monic[-2]) == (q, r_sq)

    # Monomial coefficients are ill-conditioned: one rounding of p_n already
    # costs ~1e-8 relative at n = 6, so the float route is held to 1e-10 up to n = 5.
    @given(jacobi_data(n_max=5))
    @settings(max_examples=60, deadline=None)
    def test_float(self, data):
        q, r_sq = data
        q_f, r_f = [float(x) for x in q], [float(x) ** 0.5 for x in r_sq]
        seq = recurrence_forward(q_f, r_f)
        got_q, got_r_sq = jacobi_from_polys(seq.monic[-1], seq.monic[-2])
        assert got_q == pytest.approx([float(x) for x in q], rel=1e-10, abs=1e-10)
        assert got_r_sq == pytest.approx([float(x) for x in r_sq], rel=1e-10)

    @given(jacobi_data())
    @settings(max_examples=40, deadline=None)
    def test_from_roots_matches_characteristic_polynomial(self, data):
        q, r_sq = data
        A = np.diag([float(x) for x in q])
        for i, x in enumerate(r_sq):
            A[i, i + 1] = A[i + 1, i] = float(x) ** 0.5
        eig = np.linalg.eigvalsh(A)
        seq = recurrence_forward(q, r_sq=r_sq)
        assert roots_close(float_poly(seq.monic[-1]), from_roots(list(eig)), rel=1e-9)
