"""Spectrum-to-chain reconstruction and exact certificates.

Reconstruction builds p_n from the target eigenvalues, interpolates the
sign pattern (-1)^(n+r) to get p_{n-1}, and peels the recurrence back with
Euclidean steps.  Everything stays rational until a float matrix is needed
for the eigenvalue residual.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    BudgetExceeded,
    GapNotOddInteger,
    InexactInput,
    LaplacianOddConstraintViolated,
    LaplacianStructureViolated,
    MissingExactData,
    NotPersymmetricResult,
    PotentialRequired,
    PreconditionViolated,
    PSTError,
    S1NonPositive,
    UnsupportedN,
)
from .hamiltonian import PathHamiltonian, is_persymmetric, laplacian_pattern_holds
from .numbers import PI, PiMultiple, fmt, parse_time, rational_sqrt
from .orthopoly import from_roots, interpolate_signed, jacobi_from_polys
from .spectra import Kind, Spectrum, normalize_parity, validate_kay

AUTO = "auto"


# ---------------------------------------------------------------------------
# middle entries


def alternating_sums(values: Sequence) -> tuple:
    """S1 = sum (-1)^(r+n) alpha_r and S2 = sum (-1)^(r+n) alpha_r^2."""
    n = len(values)
    s1 = s2 = 0
    for r, a in enumerate(values, start=1):
        sign = 1 if (r + n) % 2 == 0 else -1
        s1 += sign * a
        s2 += sign * a * a
    return s1, s2


@dataclass(frozen=True)
class MiddleEntries:
    n: int
    S1: Fraction
    S2: Fraction
    middle_r_sq: Fraction
    middle_q: Fraction | None
    r_index: int  # 1-based edge index of the middle weight
    q_index: int  # 1-based vertex index of the middle potential
    laplacian_adjacent_r: Fraction | None = None  # r_{n/2-1} for even Laplacian spectra

    def to_json(self) -> dict:
        out = {
            "S1": fmt(self.S1),
            "S2": fmt(self.S2),
            "middle_r_squared": fmt(self.middle_r_sq),
            "middle_q": None if self.middle_q is None else fmt(self.middle_q),
            "r_index": self.r_index,
            "q_index": self.q_index,
        }
        if self.laplacian_adjacent_r is not None:
            out["laplacian_adjacent_r"] = fmt(self.laplacian_adjacent_r)
        return out


def middle_entries(s: Spectrum, laplacian_checks: bool = True) -> MiddleEntries:
    """Centre weight and potential of the mirror-symmetric chain with spectrum ``s``."""
    if not s.exact:
        raise InexactInput("middle entries need an exact spectrum")
    n = s.n
    s1, s2 = alternating_sums(s.values)
    s1, s2 = Fraction(s1), Fraction(s2)
    lap = s.kind is Kind.LAPLACIAN and laplacian_checks
    if n % 2 == 0:
        if s1 <= 0:
            raise S1NonPositive(f"S1 = {s1} would make the middle weight non-positive")
        m = n // 2
        adj = (s2 - s1 * s1) / (2 * s1) if lap else None
        return MiddleEntries(n, s1, s2, (s1 / 2) ** 2, s2 / (2 * s1), m, m, adj)
    if lap and s2 != 2 * s1 * s1:
        raise LaplacianOddConstraintViolated(f"S2 = {s2} differs from 2 S1^2 = {2 * s1 * s1}")
    return MiddleEntries(n, s1, s2, (s2 - s1 * s1) / 4, s1, (n - 1) // 2, (n + 1) // 2)


# ---------------------------------------------------------------------------
# reconstruction


def pst_readout_time(s: Spectrum) -> PiMultiple:
    """Earliest time at which end-to-end transfer is compatible with ``s``.

    The gaps must all be odd multiples of a common rational g; the time is
    then pi/g.  Raises :class:`GapNotOddInteger` when no such time exists.
    """
    if not s.exact:
        raise InexactInput("readout inference needs exact eigenvalues")
    v = s.values
    gaps = [v[i] - v[i - 1] for i in range(1, len(v))]
    num = 0
    den = 1
    for g in gaps:
        den = den * g.denominator // math.gcd(den, g.denominator)
    for g in gaps:
        num = math.gcd(num, int(g * den))
    unit = Fraction(num, den)
    for i, g in enumerate(gaps, start=1):
        if (g / unit).numerator % 2 == 0:
            raise GapNotOddInteger(i, g)
    return PiMultiple(1 / unit)


@dataclass(frozen=True)
class SynthesisReport:
    spectrum: Spectrum
    hamiltonian: PathHamiltonian
    r_sq_exact: tuple
    q_exact: tuple
    middle: MiddleEntries
    middle_match: bool
    spectrum_residual: float
    readout_time: PiMultiple

    def to_json(self) -> dict:
        return {
            "spectrum": self.spectrum.to_json(),
            "readout_time": fmt(self.readout_time),
            "hamiltonian": self.hamiltonian.to_json(),
            "r_squared_exact": [fmt(x) for x in self.r_sq_exact],
            "q_exact": [fmt(x) for x in self.q_exact],
            "middle_check": {"match": self.middle_match, **self.middle.to_json()},
            "spectrum_residual": self.spectrum_residual,
        }


def jacobi_from_spectrum(values: Sequence) -> tuple[list, list]:
    """Mirror-symmetric Jacobi data (q, r^2) whose eigenvalues are ``values``."""
    roots = [Fraction(a) for a in values]
    p_n = from_roots(roots)
    p_nm1 = interpolate_signed(roots).monic()
    q, r_sq = jacobi_from_polys(p_n, p_nm1)
    return [Fraction(x) for x in q], [Fraction(x) for x in r_sq]


def reconstruct(s: Spectrum, t0=AUTO) -> SynthesisReport:
    """Rebuild the chain with spectrum ``s`` and end-to-end transfer.

    ``t0="auto"`` infers the earliest admissible readout time; ``None`` uses
    the spectrum's own readout time; anything else is parsed as a time.
    The Hamiltonian keeps the given eigenvalues; only the odd-gap test is
    done on the rescaled spectrum.
    """
    if not s.exact:
        raise InexactInput("reconstruction runs in exact arithmetic; pass rational eigenvalues")
    if t0 == AUTO:
        t0 = pst_readout_time(s)
    else:
        t0 = s.readout_time if t0 is None else parse_time(t0)
        validate_kay(Spectrum(s.values, s.kind, t0))

    q, r_sq = jacobi_from_spectrum(s.values)
    h = PathHamiltonian.from_r_squared(Kind.ADJACENCY, q, r_sq)
    if not is_persymmetric(h):
        raise NotPersymmetricResult("reconstructed chain is not mirror symmetric")

    mid = middle_entries(s, laplacian_checks=False)
    m_r = r_sq[mid.r_index - 1]
    m_q = q[mid.q_index - 1]
    match = m_r == mid.middle_r_sq and m_q == mid.middle_q

    if s.kind is Kind.ADJACENCY_NP and any(x != 0 for x in q):
        raise PotentialRequired("no-potential spectrum produced non-zero diagonal",
                                q=[fmt(x) for x in q])
    if s.kind is Kind.LAPLACIAN:
        if not laplacian_pattern_holds(q, h.r, r_sq):
            raise LaplacianStructureViolated(
                "diagonal is not the weighted degree sequence of the reconstructed weights",
                q=[fmt(x) for x in q], r_squared=[fmt(x) for x in r_sq])
        h = PathHamiltonian(Kind.LAPLACIAN, h.q, h.r, h.r_sq_exact)

    from .dynamics import eigensystem

    computed = eigensystem(h).eigenvalues
    residual = float(np.max(np.abs(computed - np.array(s.floats()))))
    return SynthesisReport(spectrum=s, hamiltonian=h, r_sq_exact=tuple(r_sq), q_exact=tuple(q),
                           middle=mid, middle_match=match, spectrum_residual=residual,
                           readout_time=t0 if isinstance(t0, PiMultiple) else PI)


def closed_form_small_n(s: Spectrum) -> PathHamiltonian:
    """Explicit formulas for n = 2..5 (n = 5 only without potentials)."""
    if not s.exact:
        raise InexactInput("closed forms are evaluated exactly")
    n, a = s.n, [Fraction(x) for x in s.values]
    kind = s.kind
    if n == 2:
        r_sq = [((a[1] - a[0]) / 2) ** 2]
        q = [(a[0] + a[1]) / 2] * 2
    elif n == 3:
        r1_sq = (-2 * a[1] ** 2 + 2 * a[0] * a[1] - 2 * a[0] * a[2] + 2 * a[1] * a[2]) / 4
        r_sq = [r1_sq, r1_sq]
        q = [a[1], a[0] - a[1] + a[2], a[1]]
    elif n == 4 and kind is Kind.ADJACENCY_NP:
        b1, b2 = a[2], a[3]
        r_sq = [b1 * b2, (b2 - b1) ** 2, b1 * b2]
        q = [Fraction(0)] * 4
    elif n == 4 and kind is Kind.ADJACENCY:
        s1, s2 = alternating_sums(a)
        even, odd = a[1] * a[3], a[0] * a[2]
        q1 = (even - odd) / s1
        q2 = s2 / (2 * s1)
        r1_sq = ((even - odd) * s2 - (even + odd) * s1 * s1) / (2 * s1 * s1)
        r_sq = [r1_sq, (s1 / 2) ** 2, r1_sq]
        q = [q1, q2, q2, q1]
    elif n == 5 and kind is Kind.ADJACENCY_NP:
        b1, b2 = a[3], a[4]
        r2_sq = (b2 * b2 - b1 * b1) / 2
        r_sq = [b1 * b1, r2_sq, r2_sq, b1 * b1]
        q = [Fraction(0)] * 5
    else:
        raise UnsupportedN(f"no closed form for n = {n} with kind {kind.value}")
    if kind is Kind.LAPLACIAN:
        h = PathHamiltonian.from_r_squared(Kind.ADJACENCY, q, r_sq)
        if not laplacian_pattern_holds(q, h.r, r_sq):
            raise LaplacianStructureViolated("closed-form matrix is not a Laplacian",
                                             q=[fmt(x) for x in q], r_squared=[fmt(x) for x in r_sq])
    return PathHamiltonian.from_r_squared(kind, q, r_sq)


# ---------------------------------------------------------------------------
# certificates

_REASONS = {"even_divisibility", "four_mod_four", "odd_parity", "mod8_residue", "mod4_residue"}


@dataclass(frozen=True)
class Certificate:
    claim: str  # "laplacian_infeasible" | "weight_irrational"
    n: int
    reason: str
    witness: tuple
    spectrum: tuple | None = None

    def __post_init__(self):
        if self.reason not in _REASONS:
            raise ValueError(f"unknown certificate reason {self.reason!r}")

    def verify(self) -> bool:
        """Re-derive the witness with independent modular arithmetic."""
        return _VERIFIERS[self.reason](self)

    def to_json(self) -> dict:
        out = {
            "claim": self.claim,
            "n": self.n,
            "reason": self.reason,
            "witness": [str(fmt(x)) for x in self.witness],
        }
        if self.spectrum is not None:
            out["spectrum"] = [fmt(x) for x in self.spectrum]
        return out


@dataclass(frozen=True)
class NotCovered:
    """The irrationality statement is only proved for some n; this n is outside them."""

    n: int
    detail: str = ""

    def to_json(self) -> dict:
        return {"outcome": "not_covered", "n": self.n, "n_mod_8": self.n % 8, "detail": self.detail}


def _verify_even(c: Certificate) -> bool:
    m = c.n // 2
    power, half = c.witness[:2]
    return c.n % 2 == 0 and m >= 3 and power == 2 ** (m - 1) and half == m and half % power != 0


def _verify_four(c: Certificate) -> bool:
    # 2 a2 a4 = a3 (a2 + a4) - a3^2 with a2, a4 odd and a3 even, checked over residues mod 4
    lhs_res, rhs_res = set(), set()
    for a2 in (1, 3):
        for a4 in (1, 3):
            for a3 in (0, 2):
                lhs_res.add(2 * a2 * a4 % 4)
                rhs_res.add((a3 * (a2 + a4) - a3 * a3) % 4)
    return (c.n == 4 and lhs_res == {c.witness[0]} and rhs_res == {c.witness[1]}
            and not lhs_res & rhs_res)


def _verify_odd(c: Certificate) -> bool:
    # n * (product of (n-1)/2 odd numbers) versus a product of (n-1)/2 even numbers
    n = c.n
    k = (n - 1) // 2
    lhs_parity = (n % 2) * 1
    rhs_parity = 0 if k >= 1 else 1
    return n % 2 == 1 and n >= 3 and tuple(c.witness) == (n, lhs_parity, rhs_parity) and lhs_parity != rhs_parity


def _verify_mod8(c: Certificate) -> bool:
    big_n, s1, res = c.witness
    if c.spectrum is not None:
        a1, a2, a3, a4 = (Fraction(x) for x in c.spectrum)
        s1_chk = -a1 + a2 - a3 + a4
        s2_chk = -a1 * a1 + a2 * a2 - a3 * a3 + a4 * a4
        n_chk = ((a2 * a4 - a1 * a3) * s2_chk - (a2 * a4 + a1 * a3) * s1_chk ** 2) / 2
        if n_chk != big_n or s1_chk != s1:
            return False
    big_n = Fraction(big_n)
    if big_n.denominator != 1 or big_n <= 0:
        return False
    root = math.isqrt(big_n.numerator)
    return big_n.numerator % 8 == res and res in (3, 7) and root * root != big_n.numerator


def _verify_mod4(c: Certificate) -> bool:
    d, res, pairs = c.witness
    if c.spectrum is not None:
        n = len(c.spectrum)
        s1 = s2 = 0
        for r, a in enumerate(c.spectrum, start=1):
            sign = 1 if (r + n) % 2 == 0 else -1
            s1 += sign * Fraction(a)
            s2 += sign * Fraction(a) ** 2
        if s2 - s1 * s1 != d:
            return False
        m = (n + 1) // 2
        if pairs != m * (m - 1) // 2:
            return False
    d = Fraction(d)
    return d.denominator == 1 and d.numerator % 4 == res == 2 and pairs % 2 == 1


_VERIFIERS = {
    "even_divisibility": _verify_even,
    "four_mod_four": _verify_four,
    "odd_parity": _verify_odd,
    "mod8_residue": _verify_mod8,
    "mod4_residue": _verify_mod4,
}


def laplacian_infeasibility(n: int) -> Certificate:
    """Why no weighted path on n >= 3 vertices has Laplacian end-to-end transfer."""
    if n < 3:
        raise PreconditionViolated("the Laplacian obstruction needs n >= 3")
    if n % 2 == 1:
        return Certificate("laplacian_infeasible", n, "odd_parity", (n, 1, 0))
    if n == 4:
        return Certificate("laplacian_infeasible", n, "four_mod_four", (2, 0))
    m = n // 2
    return Certificate("laplacian_infeasible", n, "even_divisibility", (2 ** (m - 1), m))


def count_odd_gap_spectra(n: int, max_eig: int) -> int:
    """Number of integer spectra 0 = a_1 < ... < a_n <= max_eig with odd gaps."""
    # ways[s] = sequences of gaps so far with total s
    ways = [0] * (max_eig + 1)
    ways[0] = 1
    for _ in range(n - 1):
        nxt = [0] * (max_eig + 1)
        for total, w in enumerate(ways):
            if w:
                for g in range(1, max_eig - total + 1, 2):
                    nxt[total + g] += w
        ways = nxt
    return sum(ways)


def odd_gap_spectra(n: int, max_eig: int, start: int = 0) -> Iterator[tuple]:
    """All integer spectra starting at ``start`` with odd gaps and top value <= max_eig."""
    def rec(prefix):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        last = prefix[-1]
        for nxt in range(last + 1, max_eig + 1, 2):
            prefix.append(nxt)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([start])


@dataclass(frozen=True)
class FalsifierReport:
    n: int
    max_eig: int
    tested: int
    feasible: tuple  # spectra that produced a valid Laplacian chain
    failures: dict  # error code -> count
    parity_identity_holds: int  # odd n: spectra where n*prod(odd) == prod(even), expected 0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "max_eig": self.max_eig,
            "tested": self.tested,
            "feasible": [list(x) for x in self.feasible],
            "failures": dict(sorted(self.failures.items())),
            "parity_identity_holds": self.parity_identity_holds,
        }


def laplacian_search_falsifier(n: int, max_eig: int, budget: int = 10 ** 7) -> FalsifierReport:
    """Try to reconstruct a Laplacian chain for every admissible small spectrum."""
    if not 3 <= n <= 8:
        raise PreconditionViolated("falsifier search runs for 3 <= n <= 8")
    total = count_odd_gap_spectra(n, max_eig)
    if total > budget:
        raise BudgetExceeded(f"{total} spectra exceed the budget of {budget}")
    failures: dict = {}
    feasible = []
    parity_hits = 0
    tested = 0
    for vals in odd_gap_spectra(n, max_eig):
        tested += 1
        s = Spectrum(vals, Kind.LAPLACIAN)
        try:
            reconstruct(s, t0=PI)
        except PSTError as exc:
            failures[exc.code] = failures.get(exc.code, 0) + 1
        else:
            feasible.append(vals)
        if n % 2 == 1:
            odd = math.prod(vals[1::2])
            even = math.prod(vals[2::2])
            if n * odd == even:
                parity_hits += 1
    return FalsifierReport(n, max_eig, tested, tuple(feasible), failures, parity_hits)


def rationality_certificate(s: Spectrum):
    """Certificate that some weight of the chain for ``s`` is irrational.

    Returns :class:`NotCovered` for sizes outside n = 4 and odd n >= 5 with
    n = 3 or 5 (mod 8).
    """
    if not s.exact:
        raise InexactInput("certificates need exact eigenvalues")
    if s.kind is Kind.LAPLACIAN:
        raise PreconditionViolated("rationality certificates are for adjacency spectra")
    if s.readout_time != PI:
        raise PreconditionViolated("spectrum must be scaled to readout time pi")
    vals = [Fraction(x) for x in s.values]
    if any(x.denominator != 1 for x in vals):
        raise PreconditionViolated("eigenvalues must be integers")
    for r, a in enumerate(vals, start=1):
        if a.numerator % 2 != r % 2:
            raise PreconditionViolated("odd-indexed eigenvalues must be odd, even-indexed even")
    try:
        validate_kay(s)
    except PSTError as exc:
        raise PreconditionViolated(f"odd-gap condition fails: {exc}") from exc
    n = s.n
    if n == 4:
        a1, a2, a3, a4 = vals
        s1, s2 = alternating_sums(vals)
        big_n = ((a2 * a4 - a1 * a3) * s2 - (a2 * a4 + a1 * a3) * s1 * s1) / 2
        return Certificate("weight_irrational", 4, "mod8_residue",
                           (big_n, s1, int(big_n) % 8), spectrum=tuple(vals))
    if n >= 5 and n % 8 in (3, 5):
        s1, s2 = alternating_sums(vals)
        d = s2 - s1 * s1
        m = (n + 1) // 2
        return Certificate("weight_irrational", n, "mod4_residue",
                           (d, int(d) % 4, m * (m - 1) // 2), spectrum=tuple(vals))
    return NotCovered(n, "irrationality is only established for n = 4 and n = 3, 5 (mod 8), n >= 5")


def all_rational_check(h: PathHamiltonian) -> bool:
    """True iff every edge weight is rational (each r^2 is a rational square)."""
    ex = h.r_squared_exact()
    if ex is None:
        raise MissingExactData("need exact squared weights")
    return all(rational_sqrt(x) is not None for x in ex)


# ---------------------------------------------------------------------------
# seeded scans


def item_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for item ``index`` of a scan keyed by ``seed``."""
    return np.random.Generator(np.random.Philox(key=seed, counter=[0, 0, 0, index]))


def random_gaps(rng: np.random.Generator, count: int) -> list[int]:
    return [2 * int(u) + 1 for u in rng.integers(0, 5, size=count)]


def random_spectrum(n: int, rng: np.random.Generator, kind: Kind = Kind.ADJACENCY) -> Spectrum:
    """Random exact spectrum satisfying the odd-gap condition at time pi.

    Adjacency spectra are parity-normalized (a_1 odd); Laplacian ones start
    at 0; no-potential ones are symmetric about 0.
    """
    if kind is Kind.ADJACENCY_NP:
        if n % 2 == 1:
            half = np.cumsum(random_gaps(rng, n // 2)).tolist()
            vals = [-x for x in reversed(half)] + [0] + half
            return Spectrum.of([Fraction(int(x)) for x in vals], kind)
        first = Fraction(2 * int(rng.integers(0, 5)) + 1, 2)
        half = [first]
        for g in random_gaps(rng, n // 2 - 1):
            half.append(half[-1] + g)
        return Spectrum.of([-x for x in reversed(half)] + half, kind)
    gaps = random_gaps(rng, n - 1)
    base = 0 if kind is Kind.LAPLACIAN else int(rng.integers(-10, 11))
    vals = [Fraction(base)]
    for g in gaps:
        vals.append(vals[-1] + g)
    s = Spectrum(tuple(vals), kind)
    if kind is Kind.ADJACENCY:
        s, _ = normalize_parity(s)
    return s


@dataclass(frozen=True)
class ScanItem:
    index: int
    spectrum: tuple
    residue: int | None
    modulus: int | None
    certified: bool
    rational_weights: bool | None
    outcome: str


def _scan_one(args) -> ScanItem:
    n, seed, index, check_weights = args
    s = random_spectrum(n, item_rng(seed, index))
    cert = rationality_certificate(s)
    rational = None
    if check_weights:
        rational = all_rational_check(reconstruct(s).hamiltonian)
    if isinstance(cert, NotCovered):
        return ScanItem(index, s.values, None, None, False, rational, "not_covered")
    modulus = 8 if cert.reason == "mod8_residue" else 4
    residue = cert.witness[2] if modulus == 8 else cert.witness[1]
    return ScanItem(index, s.values, int(residue), modulus, cert.verify(), rational, "certified")


@dataclass(frozen=True)
class ScanSummary:
    n: int
    count: int
    seed: int
    items: tuple = field(repr=False)

    @property
    def histogram(self) -> dict:
        out: dict = {}
        for it in self.items:
            key = "not_covered" if it.residue is None else str(it.residue)
            out[key] = out.get(key, 0) + 1
        return dict(sorted(out.items()))

    @property
    def counterexamples(self) -> int:
        """Items where the certificate failed to verify or a weight set came out all rational."""
        return sum(1 for it in self.items
                   if (it.outcome == "certified" and not it.certified) or it.rational_weights)

    def to_json(self) -> dict:
        mods = {it.modulus for it in self.items if it.modulus}
        return {
            "n": self.n,
            "count": self.count,
            "seed": self.seed,
            "tested": len(self.items),
            "modulus": mods.pop() if len(mods) == 1 else None,
            "residue_histogram": self.histogram,
            "counterexamples": self.counterexamples,
            "all_rational_weight_sets": sum(1 for it in self.items if it.rational_weights),
        }


def resolve_workers(workers: int | None) -> int:
    if workers is None:
        workers = int(os.environ.get("PSTLAB_WORKERS", "1") or 1)
    return max(1, int(workers))


def rationality_scan(n: int, count: int, seed: int = 0, workers: int | None = None,
                     check_weights: bool | None = None) -> ScanSummary:
    """Certify ``count`` seeded random spectra; results are in index order for any worker count."""
    check_weights = (n == 4) if check_weights is None else check_weights
    jobs = [(n, seed, i, check_weights) for i in range(count)]
    workers = resolve_workers(workers)
    if workers == 1 or count < 2:
        items = [_scan_one(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            items = list(pool.map(_scan_one, jobs, chunksize=max(1, count // (4 * workers))))
    return ScanSummary(n=n, count=count, seed=seed, items=tuple(items))
