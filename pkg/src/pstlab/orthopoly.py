"""Dense polynomials and the orthogonal sequence of a Jacobi matrix.

Coefficients are stored constant term first.  The same code paths serve
exact (``Fraction``) and floating coefficients; exactness is whatever the
inputs were.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateInterpolation, DegreeDrop, NegativeWeightSquared, NonPositiveOffdiag
from .numbers import fmt, is_exact, sqrt_value


class Poly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def x(cls) -> "Poly":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else 0

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) - other.coeff(k) for k in range(n))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(c * other for c in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Poly":
        return Poly(c / scalar for c in self.coeffs)

    def shift_up(self) -> "Poly":
        """Multiply by x."""
        return Poly((0,) + self.coeffs) if self.coeffs else Poly()

    def monic(self) -> "Poly":
        return self / self.leading

    def deflate(self, root) -> "Poly":
        """Quotient of synthetic division by ``(x - root)``; the remainder is dropped."""
        n = self.degree
        out = [0] * n
        acc = 0
        for k in range(n, 0, -1):
            acc = acc * root + self.coeffs[k]
            out[k - 1] = acc
        return Poly(out)

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[fmt(c) for c in self.coeffs]})"

    def to_json(self) -> list:
        return [fmt(c) for c in self.coeffs]


@dataclass(frozen=True)
class OrthoPolySeq:
    """Monic p_0..p_n of the three-term recurrence plus the similarity scalings d_1..d_n."""

    monic: tuple
    scalings: tuple
    kind: str = "adjacency"

    @property
    def n(self) -> int:
        return len(self.monic) - 1

    def scaled(self, k: int) -> Poly:
        """The normalized polynomial d_{k+1} p_k."""
        return self.monic[k] * self.scalings[k]


def recurrence_forward(q: Sequence, r: Sequence | None = None, *, r_sq: Sequence | None = None,
                       kind: str = "adjacency") -> OrthoPolySeq:
    """Run p_k = (x - q_k) p_{k-1} - r_{k-1}^2 p_{k-2} from p_{-1} = 0, p_0 = 1.

    Pass either the off-diagonal magnitudes ``r`` or their squares ``r_sq``
    (the exact route).  ``kind`` picks the sign pattern of the scalings.
    """
    n = len(q)
    if r_sq is None:
        if r is None:
            raise TypeError("need r or r_sq")
        if len(r) != n - 1:
            raise ValueError("len(r) must be len(q) - 1")
        if any(x <= 0 for x in r):
            raise NonPositiveOffdiag("off-diagonal weights must be positive")
        mags = list(r)
        r_sq = [x * x for x in r]
    else:
        if len(r_sq) != n - 1:
            raise ValueError("len(r_sq) must be len(q) - 1")
        if any(x <= 0 for x in r_sq):
            raise NonPositiveOffdiag("off-diagonal weights must be positive")
        mags = [sqrt_value(x) for x in r_sq]

    one = Fraction(1)
    prev, cur = Poly(), Poly.const(one)
    polys = [cur]
    for k in range(1, n + 1):
        nxt = cur.shift_up() - cur * q[k - 1]
        if k >= 2:
            nxt = nxt - prev * r_sq[k - 2]
        prev, cur = cur, nxt
        polys.append(cur)

    sign = -1 if kind == "laplacian" else 1
    d = [one]
    for j in range(1, n):
        d.append(sign * d[-1] / mags[j - 1])
    return OrthoPolySeq(monic=tuple(polys), scalings=tuple(d), kind=kind)


def from_roots(roots: Sequence) -> Poly:
    """Monic polynomial with exactly the given roots."""
    p = Poly.const(Fraction(1))
    for a in roots:
        p = p.shift_up() - p * a
    return p


def barycentric_weights(roots: Sequence) -> list:
    w = []
    for i, a in enumerate(roots):
        prod = 1
        for j, b in enumerate(roots):
            if i != j:
                prod = prod * (a - b)
        w.append(1 / prod)
    return w


def interpolate_signed(roots: Sequence, n: int | None = None) -> Poly:
    """Degree n-1 polynomial taking the value (-1)^(n+r) at the r-th root (1-based).

    The roots must be ascending.  Each Lagrange basis polynomial is
    ``w_r * p_n(x) / (x - alpha_r)``; for exact roots the result is exact.
    """
    n = len(roots) if n is None else n
    if n != len(roots):
        raise ValueError("n must equal the number of roots")
    roots = [Fraction(a) if is_exact(a) else float(a) for a in roots]
    pn = from_roots(roots)
    weights = barycentric_weights(roots)
    out = Poly()
    for r, (a, w) in enumerate(zip(roots, weights), start=1):
        sign = 1 if (n + r) % 2 == 0 else -1
        out = out + pn.deflate(a) * (sign * w)
    if out.degree != n - 1 or out.leading <= 0:
        raise DegenerateInterpolation(
            "sign-alternating interpolant lost degree or has non-positive leading coefficient")
    return out


def euclidean_step(p_k: Poly, p_km1: Poly):
    """One backwards step of the recurrence.

    Given monic p_k and p_{k-1}, return ``(q_k, r_{k-1}^2, p_{k-2})`` with
    ``p_k = (x - q_k) p_{k-1} - r_{k-1}^2 p_{k-2}``.  For k = 1 the weight and
    p_{-1} are returned as ``None``.
    """
    k = p_k.degree
    if p_km1.degree != k - 1:
        raise ValueError("p_km1 must have degree one less than p_k")
    q_k = (p_km1.shift_up() - p_k).coeff(k - 1)
    if k == 1:
        return q_k, None, None
    rem = (p_km1.shift_up() - p_km1 * q_k) - p_k
    # x^k and x^(k-1) cancel by construction; in float mode drop the residue
    low = rem.coeffs[: k - 1]
    r_sq = rem.coeff(k - 2)
    if not low or _is_zero(r_sq, p_k):
        raise DegreeDrop(f"remainder dropped below degree {k - 2}")
    if r_sq < 0:
        raise NegativeWeightSquared(f"r_{k - 1}^2 = {r_sq} is not positive", index=k - 1)
    return q_k, r_sq, Poly(low) / r_sq


def _is_zero(c, ref: Poly) -> bool:
    if is_exact(c):
        return c == 0
    scale = max((abs(float(x)) for x in ref.coeffs), default=1.0)
    return abs(float(c)) <= 1e-14 * max(1.0, scale)


def jacobi_from_polys(p_n: Poly, p_nm1: Poly):
    """Run euclidean_step down to p_0; returns (q, r_sq) in vertex order 1..n."""
    n = p_n.degree
    qs, rs = [], []
    a, b = p_n, p_nm1
    for _ in range(n, 0, -1):
        q_k, r_sq, c = euclidean_step(a, b)
        qs.append(q_k)
        if r_sq is not None:
            rs.append(r_sq)
        a, b = b, c
    qs.reverse()
    rs.reverse()
    return qs, rs


def float_poly(p: Poly) -> Poly:
    return Poly(float(c) for c in p.coeffs)


def roots_close(p: Poly, other: Poly, rel: float = 1e-9) -> bool:
    """Coefficient-wise comparison at relative tolerance ``rel``."""
    if p.degree != other.degree:
        return False
    scale = max(max(abs(float(c)) for c in p.coeffs), 1.0)
    return all(math.isclose(float(a), float(b), rel_tol=rel, abs_tol=rel * scale)
               for a, b in zip(p.coeffs, other.coeffs))
