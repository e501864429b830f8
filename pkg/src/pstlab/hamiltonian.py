"""Tridiagonal path Hamiltonians, their mirror block split, and symmetric trees."""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Hashable, Sequence

import numpy as np

from .errors import (
    DisconnectedHalf,
    NonPositiveOffdiag,
    NonPositiveWeight,
    NotPersymmetric,
    StructureError,
)
from .numbers import fmt, is_exact, parse_scalar, rational_sqrt, sqrt_value, sum_of_sqrts_equals
from .orthopoly import recurrence_forward
from .spectra import Kind

MAX_N = 500
STRUCT_TOL = 1e-12


def _hkind(kind) -> Kind:
    k = Kind.parse(kind)
    return Kind.ADJACENCY if k is Kind.ADJACENCY_NP else k


@dataclass(frozen=True)
class PathHamiltonian:
    """Weighted path: diagonal ``q`` and positive edge weights ``r``.

    Adjacency matrices carry ``+r`` off the diagonal, Laplacians ``-r``.
    ``r_sq_exact`` keeps the squared weights as rationals when known, which
    is the only faithful representation of irrational weights.
    """

    kind: Kind
    q: tuple
    r: tuple
    r_sq_exact: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", _hkind(self.kind))
        object.__setattr__(self, "q", tuple(parse_scalar(x) for x in self.q))
        object.__setattr__(self, "r", tuple(parse_scalar(x) for x in self.r))
        if self.r_sq_exact is not None:
            object.__setattr__(self, "r_sq_exact", tuple(Fraction(x) for x in self.r_sq_exact))
        n = len(self.q)
        if n < 2:
            raise StructureError("a path needs at least two vertices")
        if n > MAX_N:
            raise StructureError(f"n = {n} exceeds the cap of {MAX_N}")
        if len(self.r) != n - 1:
            raise StructureError("need exactly n-1 edge weights")
        if any(x <= 0 for x in self.r):
            raise NonPositiveOffdiag("edge weights must be positive")
        if self.r_sq_exact is not None:
            if len(self.r_sq_exact) != n - 1:
                raise StructureError("r_sq_exact must have n-1 entries")
            for a, a2 in zip(self.r, self.r_sq_exact):
                if not _square_matches(a, a2):
                    raise StructureError(f"r = {a} is not the square root of {a2}")
        if self.kind is Kind.LAPLACIAN and not laplacian_pattern_holds(self.q, self.r, self.r_sq_exact):
            raise StructureError("Laplacian diagonal must be the weighted degrees")

    # constructors ------------------------------------------------------------
    @classmethod
    def from_r_squared(cls, kind, q: Sequence, r_sq: Sequence) -> "PathHamiltonian":
        r_sq = [Fraction(x) if is_exact(x) else float(x) for x in r_sq]
        if any(x <= 0 for x in r_sq):
            raise NonPositiveOffdiag("squared weights must be positive")
        exact = all(is_exact(x) for x in r_sq)
        return cls(kind, tuple(q), tuple(sqrt_value(x) for x in r_sq),
                   tuple(r_sq) if exact else None)

    @classmethod
    def adjacency(cls, r: Sequence, q: Sequence | None = None) -> "PathHamiltonian":
        q = [Fraction(0)] * (len(r) + 1) if q is None else q
        return cls(Kind.ADJACENCY, tuple(q), tuple(r))

    @classmethod
    def laplacian(cls, r: Sequence) -> "PathHamiltonian":
        r = [parse_scalar(x) for x in r]
        return cls(Kind.LAPLACIAN, tuple(degrees(r)), tuple(r))

    # views -------------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.q)

    @property
    def exact(self) -> bool:
        return all(is_exact(x) for x in self.q) and self.r_squared_exact() is not None

    def r_squared_exact(self) -> tuple | None:
        if self.r_sq_exact is not None:
            return self.r_sq_exact
        if all(is_exact(x) for x in self.r):
            return tuple(Fraction(x) ** 2 for x in self.r)
        return None

    def r_squared(self) -> tuple:
        ex = self.r_squared_exact()
        return ex if ex is not None else tuple(float(x) ** 2 for x in self.r)

    def r_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.r])

    def q_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.q])

    def offdiag(self) -> np.ndarray:
        """Signed off-diagonal as stored in the matrix."""
        sign = -1.0 if self.kind is Kind.LAPLACIAN else 1.0
        return sign * self.r_float()

    def to_json(self) -> dict:
        out = {
            "kind": self.kind.value,
            "q": [fmt(x) for x in self.q],
            "r": [fmt(x) for x in self.r],
        }
        ex = self.r_squared_exact()
        if ex is not None:
            out["r_squared_exact"] = [fmt(x) for x in ex]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PathHamiltonian":
        kind = obj.get("kind", "adjacency")
        q = obj.get("q")
        r_sq = obj.get("r_squared_exact")
        r = obj.get("r")
        if r is None and r_sq is None:
            raise StructureError("Hamiltonian JSON needs r or r_squared_exact")
        if r is None:
            r_sq = [parse_scalar(x) for x in r_sq]
            r = [sqrt_value(x) for x in r_sq]
        else:
            r = [parse_scalar(x) for x in r]
        if q is None:
            if _hkind(kind) is Kind.LAPLACIAN:
                q = degrees(r)
            else:
                q = [Fraction(0)] * (len(r) + 1)
        return cls(kind, tuple(q), tuple(r), tuple(parse_scalar(x) for x in r_sq) if r_sq else None)


def _square_matches(a, a2) -> bool:
    if is_exact(a):
        return Fraction(a) ** 2 == a2
    return math.isclose(float(a) ** 2, float(a2), rel_tol=1e-12, abs_tol=0.0)


def degrees(r: Sequence) -> list:
    """Weighted degrees of a path with edge weights ``r``."""
    n = len(r) + 1
    q = []
    for j in range(n):
        left = r[j - 1] if j > 0 else 0
        right = r[j] if j < n - 1 else 0
        q.append(left + right)
    return q


def laplacian_pattern_holds(q: Sequence, r: Sequence, r_sq: Sequence | None = None,
                            tol: float = STRUCT_TOL) -> bool:
    """Whether ``q`` equals the weighted degree sequence of ``r``.

    Decided exactly when ``q`` and ``r_sq`` are rational (sums of square
    roots are compared by squaring), otherwise at relative tolerance ``tol``.
    """
    n = len(q)
    if r_sq is None and all(is_exact(x) for x in r):
        r_sq = [Fraction(x) ** 2 for x in r]
    if r_sq is not None and all(is_exact(x) for x in q):
        for j in range(n):
            a = r_sq[j - 1] if j > 0 else Fraction(0)
            b = r_sq[j] if j < n - 1 else Fraction(0)
            if not sum_of_sqrts_equals(Fraction(q[j]), a, b):
                return False
        return True
    deg = degrees([float(x) for x in r])
    return all(abs(float(a) - b) <= tol * max(1.0, abs(b)) for a, b in zip(q, deg))


def build_matrix(h: PathHamiltonian, exact: bool = False):
    """Dense symmetric tridiagonal matrix (list of Fraction rows when ``exact``)."""
    n = h.n
    if exact:
        if not (all(is_exact(x) for x in h.q) and all(is_exact(x) for x in h.r)):
            raise StructureError("exact matrix needs rational q and r")
        sign = -1 if h.kind is Kind.LAPLACIAN else 1
        m = [[Fraction(0)] * n for _ in range(n)]
        for j in range(n):
            m[j][j] = Fraction(h.q[j])
        for j in range(n - 1):
            m[j][j + 1] = m[j + 1][j] = sign * Fraction(h.r[j])
        return m
    off = h.offdiag()
    return np.diag(h.q_float()) + np.diag(off, 1) + np.diag(off, -1)


def is_persymmetric(h: PathHamiltonian, tol: float = 1e-12) -> bool:
    """Mirror symmetry q_j = q_{n+1-j}, r_j = r_{n-j}; exact where data is rational."""
    n = h.n
    for j in range(n // 2):
        a, b = h.q[j], h.q[n - 1 - j]
        if is_exact(a) and is_exact(b):
            if a != b:
                return False
        elif abs(float(a) - float(b)) > tol * max(1.0, abs(float(a))):
            return False
    rs = h.r_squared()
    m = n - 1
    for j in range(m // 2):
        a, b = rs[j], rs[m - 1 - j]
        if is_exact(a) and is_exact(b):
            if a != b:
                return False
        elif abs(float(a) - float(b)) > tol * max(1.0, abs(float(a))):
            return False
    return True


@dataclass(frozen=True)
class BlockSplit:
    """Mirror decomposition of a persymmetric matrix into two smaller blocks.

    Even n: ``B1 = E - RC`` and ``B2 = E + RC``.  Odd n: ``B1 = E - RC`` and
    ``B2 = [[c, sqrt2 x^T], [sqrt2 x, E + RC]]`` with the centre entry ``c``
    first.  Eigenvectors lift back to the full matrix through
    :meth:`lift_b1` (antisymmetric) and :meth:`lift_b2` (symmetric).
    """

    B1: np.ndarray
    B2: np.ndarray
    parity: str
    E: np.ndarray
    C: np.ndarray
    x: np.ndarray | None = None
    center: float | None = None

    @property
    def n(self) -> int:
        return self.B1.shape[0] + self.B2.shape[0]

    def lift_b1(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=float)
        mid = [] if self.parity == "even" else [0.0]
        out = np.concatenate([v, mid, -v[::-1]])
        return out / np.linalg.norm(out)

    def lift_b2(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        if self.parity == "even":
            out = np.concatenate([u, u[::-1]])
        else:
            a, rest = u[0], u[1:]
            out = np.concatenate([rest, [math.sqrt(2.0) * a], rest[::-1]])
        return out / np.linalg.norm(out)


def split_dense(H) -> BlockSplit:
    """Block split of any dense matrix that is persymmetric under reversal."""
    H = np.asarray(H, dtype=float)
    n = H.shape[0]
    if not np.allclose(H, H[::-1, ::-1], rtol=0, atol=1e-12 * max(1.0, np.abs(H).max())):
        raise NotPersymmetric("matrix is not symmetric about the anti-diagonal")
    m = n // 2
    E = H[:m, :m]
    if n % 2 == 0:
        C = H[m:, :m]
        RC = C[::-1, :]
        return BlockSplit(B1=E - RC, B2=E + RC, parity="even", E=E.copy(), C=C.copy())
    x = H[:m, m]
    c = H[m, m]
    C = H[m + 1:, :m]
    RC = C[::-1, :]
    B2 = np.zeros((m + 1, m + 1))
    B2[0, 0] = c
    B2[0, 1:] = math.sqrt(2.0) * x
    B2[1:, 0] = math.sqrt(2.0) * x
    B2[1:, 1:] = E + RC
    return BlockSplit(B1=E - RC, B2=B2, parity="odd", E=E.copy(), C=C.copy(), x=x.copy(), center=float(c))


def block_split(h: PathHamiltonian) -> BlockSplit:
    if not is_persymmetric(h):
        raise NotPersymmetric("path Hamiltonian is not mirror symmetric")
    return split_dense(build_matrix(h))


def similarity_scalings(h: PathHamiltonian) -> list:
    """Diagonal d_1..d_n with Q M = A Q (adjacency) or T M = L T (Laplacian)."""
    seq = recurrence_forward(h.q, r=h.r, kind=h.kind.value)
    return list(seq.scalings)


def multiplication_operator(h: PathHamiltonian):
    """Matrix of multiplication by x in the monic basis, and the diagonal similarity.

    Returns ``(M, D)``: M has q on the diagonal, ones above and r^2 below.
    """
    n = h.n
    rs = [float(x) for x in h.r_squared()]
    M = np.diag(h.q_float()) + np.diag(np.ones(n - 1), 1) + np.diag(rs, -1)
    D = np.diag([float(d) for d in similarity_scalings(h)])
    return M, D


# ---------------------------------------------------------------------------
# symmetric trees


@dataclass(frozen=True)
class SymmetricTree:
    """Weighted tree G joined to its mirror copy by a bridge.

    ``edges`` are ``(u, v, w)`` triples of G.  Without a centre the bridge
    joins ``attach`` to its mirror image; with a centre a new vertex sits
    between them and both bridge edges carry ``bridge_weight``.
    """

    edges: tuple
    bridge_weight: Fraction
    attach: Hashable
    center: bool = False
    vertices: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((u, v, parse_scalar(w)) for u, v, w in self.edges))
        object.__setattr__(self, "bridge_weight", parse_scalar(self.bridge_weight))

    def half_vertices(self) -> list:
        seen = [] if self.vertices is None else list(self.vertices)
        for u, v, _ in self.edges:
            for x in (u, v):
                if x not in seen:
                    seen.append(x)
        if self.attach not in seen:
            seen.append(self.attach)
        return seen

    def to_json(self) -> dict:
        return {
            "edges": [[u, v, fmt(w)] for u, v, w in self.edges],
            "bridge_weight": fmt(self.bridge_weight),
            "attach": self.attach,
            "center": self.center,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SymmetricTree":
        return cls(edges=tuple(tuple(e) for e in obj["edges"]), bridge_weight=obj["bridge_weight"],
                   attach=obj["attach"], center=bool(obj.get("center", False)))


@dataclass(frozen=True)
class TreeLaplacian:
    matrix: np.ndarray
    exact: tuple | None
    mirror: tuple  # 0-based: position i <-> mirror[i]
    labels: tuple

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def build_symmetric_tree(t: SymmetricTree) -> TreeLaplacian:
    """Laplacian of G - bridge - mirror(G) in an ordering that is persymmetric.

    G is laid out in reverse breadth-first order from the attach vertex (so
    the attach vertex sits next to the middle), then the centre if any, then
    the mirror copy in breadth-first order.  For a path half this reproduces
    the natural path ordering.
    """
    verts = t.half_vertices()
    if t.bridge_weight <= 0 or any(w <= 0 for _, _, w in t.edges):
        raise NonPositiveWeight("tree weights must be positive")
    adj: dict = {v: [] for v in verts}
    for u, v, w in t.edges:
        adj[u].append(v)
        adj[v].append(u)
    order, seen = [], {t.attach}
    queue = deque([t.attach])
    while queue:
        u = queue.popleft()
        order.append(u)
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    if len(order) != len(verts):
        raise DisconnectedHalf("half tree is not connected")
    if len(t.edges) != len(verts) - 1:
        raise StructureError("half graph has a cycle; expected a tree")

    g = len(verts)
    half = list(reversed(order))
    pos = {v: i for i, v in enumerate(half)}
    n = 2 * g + (1 if t.center else 0)

    def mirror_pos(i):
        return n - 1 - i

    edges = []
    for u, v, w in t.edges:
        edges.append((pos[u], pos[v], w))
        edges.append((mirror_pos(pos[u]), mirror_pos(pos[v]), w))
    a = pos[t.attach]
    if t.center:
        c = g
        edges.append((a, c, t.bridge_weight))
        edges.append((mirror_pos(a), c, t.bridge_weight))
    else:
        edges.append((a, mirror_pos(a), t.bridge_weight))

    exact_ok = all(is_exact(w) for _, _, w in edges)
    zero = Fraction(0) if exact_ok else 0.0
    L = [[zero] * n for _ in range(n)]
    for i, j, w in edges:
        L[i][j] -= w
        L[j][i] -= w
        L[i][i] += w
        L[j][j] += w
    labels = [("G", v) for v in half] + ([("center",)] if t.center else []) + \
             [("G~", v) for v in reversed(half)]
    matrix = np.array([[float(x) for x in row] for row in L])
    return TreeLaplacian(
        matrix=matrix,
        exact=tuple(tuple(row) for row in L) if exact_ok else None,
        mirror=tuple(mirror_pos(i) for i in range(n)),
        labels=tuple(labels),
    )


def tree_block_split(L, mirror: Sequence[int] | None = None) -> tuple[BlockSplit, list]:
    """Block split of a Laplacian that is persymmetric under ``mirror``.

    The matrix is first reordered so the mirror map becomes reversal; the
    permutation used is returned with the split (identity for trees built
    by :func:`build_symmetric_tree`).
    """
    if isinstance(L, TreeLaplacian):
        mirror = L.mirror if mirror is None else mirror
        L = L.matrix
    L = np.asarray(L, dtype=float)
    n = L.shape[0]
    mirror = list(range(n - 1, -1, -1)) if mirror is None else list(mirror)
    if sorted(mirror) != list(range(n)) or any(mirror[mirror[i]] != i for i in range(n)):
        raise NotPersymmetric("mirror map must be an involution on the vertices")
    fixed = [i for i in range(n) if mirror[i] == i]
    if len(fixed) != n % 2:
        raise NotPersymmetric("mirror map must fix exactly the centre vertex")
    first = [i for i in range(n) if i < mirror[i]]
    perm = first + fixed + [mirror[i] for i in reversed(first)]
    P = L[np.ix_(perm, perm)]
    return split_dense(P), perm


def zero_entry_report(Q, tol: float = 1e-10, skip_first_row: bool = False) -> bool:
    """True when the eigenvector matrix ``Q`` has no (near-)zero entries."""
    Q = np.asarray(Q, dtype=float)
    body = Q[1:] if skip_first_row else Q
    return bool(np.all(np.abs(body) > tol))


def path_tree(r_half: Sequence, bridge, center: bool) -> SymmetricTree:
    """Symmetric tree whose half is the path with weights ``r_half``."""
    g = len(r_half) + 1
    edges = tuple((i, i + 1, w) for i, w in enumerate(r_half))
    return SymmetricTree(edges=edges, bridge_weight=bridge, attach=g - 1, center=center,
                         vertices=tuple(range(g)))


def rational_r(h: PathHamiltonian) -> list | None:
    """Exact edge weights when every squared weight is a rational square."""
    ex = h.r_squared_exact()
    if ex is None:
        return None
    out = [rational_sqrt(x) for x in ex]
    return None if any(x is None for x in out) else out


def random_symmetric_tree(rng, max_half: int = 5, center: bool | None = None) -> SymmetricTree:
    """Random tree G (2..max_half vertices, or 1 with a centre) with rational weights.

    Weights are k/4 with k in 1..12.  Each new vertex attaches to a uniformly
    chosen earlier one; the bridge attaches at a random vertex of G.
    """
    g = int(rng.integers(1, max_half + 1))
    if center is None:
        center = bool(rng.integers(0, 2))
    if g == 1:
        center = True  # two vertices joined directly would be P2
    weight = lambda: Fraction(int(rng.integers(1, 13)), 4)  # noqa: E731
    edges = tuple((int(rng.integers(0, v)), v, weight()) for v in range(1, g))
    return SymmetricTree(edges=edges, bridge_weight=weight(), attach=int(rng.integers(0, g)),
                         center=center, vertices=tuple(range(g)))
