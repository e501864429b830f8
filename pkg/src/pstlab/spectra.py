"""Target spectra and the necessary conditions for end-to-end transfer.

A :class:`Spectrum` holds the distinct eigenvalues of a prospective path
Hamiltonian in ascending order.  Values built from integers, fractions or
``"p/q"`` strings stay exact; float inputs mark the whole spectrum inexact.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    GapNotOddInteger,
    MixedExactness,
    NonDistinct,
    NotIntegerizable,
    PatternViolation,
    PreconditionViolated,
    SpectrumError,
)
from .numbers import PI, PiMultiple, Scalar, Time, fmt, is_exact, parse_scalar, parse_time

KAY_TOL = 1e-9


class Kind(enum.Enum):
    ADJACENCY = "adjacency"
    ADJACENCY_NP = "adjacency_np"
    LAPLACIAN = "laplacian"

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise SpectrumError(f"unknown kind {value!r}") from None


@dataclass(frozen=True)
class Spectrum:
    values: tuple
    kind: Kind = Kind.ADJACENCY
    readout_time: Time = PI

    def __post_init__(self):
        vals = tuple(parse_scalar(v) for v in self.values)
        kinds = {is_exact(v) for v in vals}
        if len(kinds) > 1:
            raise MixedExactness("spectrum mixes exact and floating values")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        object.__setattr__(self, "readout_time", parse_time(self.readout_time))
        self._check()

    def _check(self):
        v = self.values
        if len(v) < 2:
            raise SpectrumError("a spectrum needs at least two eigenvalues")
        for i in range(1, len(v)):
            if v[i] == v[i - 1]:
                raise NonDistinct(f"repeated eigenvalue {v[i]}", index=i)
            if v[i] < v[i - 1]:
                raise SpectrumError("values must be strictly increasing")
        if self.kind is Kind.ADJACENCY_NP:
            n = len(v)
            tol = 0.0 if self.exact else KAY_TOL * max(1.0, abs(float(v[-1])))
            for a, b in zip(v, reversed(v)):
                if abs(a + b) > tol:
                    raise SpectrumError("no-potential spectra must be symmetric about 0")
            has_zero = any(abs(x) <= tol for x in v)
            if has_zero != (n % 2 == 1):
                raise SpectrumError("0 must be an eigenvalue exactly when n is odd")
        elif self.kind is Kind.LAPLACIAN:
            tol = 0.0 if self.exact else KAY_TOL
            if abs(v[0]) > tol:
                raise SpectrumError("a Laplacian spectrum starts at 0")

    @classmethod
    def of(cls, values: Iterable, kind="adjacency", readout_time="pi") -> "Spectrum":
        """Sort ``values`` first; duplicates raise :class:`NonDistinct`."""
        vals = sorted(parse_scalar(x) for x in values)
        return cls(tuple(vals), Kind.parse(kind), parse_time(readout_time))

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def exact(self) -> bool:
        return is_exact(self.values[0])

    def floats(self) -> list[float]:
        return [float(x) for x in self.values]

    def betas(self) -> tuple:
        """Non-negative half of a no-potential spectrum, beta_0 = 0 included for odd n."""
        return tuple(x for x in self.values if x >= 0)

    # JSON ------------------------------------------------------------------
    def to_json(self) -> dict:
        return {
            "kind": self.kind.value,
            "values": [fmt(x) for x in self.values],
            "readout_time": fmt(self.readout_time),
        }

    @classmethod
    def from_json(cls, obj) -> "Spectrum":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.of(obj["values"], obj.get("kind", "adjacency"), obj.get("readout_time", "pi"))


@dataclass(frozen=True)
class KayWitness:
    """Odd-gap witness: ``gaps[r] == 2*m_values[r] + 1`` after scaling to time pi."""

    gaps: tuple
    m_values: tuple | None
    scaled_time: float = field(default=math.pi)
    scale: Scalar = Fraction(1)


def rescale_to_pi(s: Spectrum, t0=None) -> Spectrum:
    """Scale the Hamiltonian so that a transfer time ``t0`` becomes pi.

    ``t0`` defaults to the spectrum's own readout time.  When ``t0`` is a
    rational multiple of pi and the values are exact the result stays exact.
    """
    t0 = s.readout_time if t0 is None else parse_time(t0)
    if isinstance(t0, PiMultiple) and s.exact:
        c = t0.coeff
        vals = tuple(x * c for x in s.values)
    else:
        c = float(t0) / math.pi
        vals = tuple(float(x) * c for x in s.values)
    return Spectrum(vals, s.kind, PI)


def _odd_gap_m(gap: Scalar) -> int | None:
    if is_exact(gap):
        g = Fraction(gap)
        if g.denominator == 1 and g.numerator > 0 and g.numerator % 2 == 1:
            return (g.numerator - 1) // 2
        return None
    g = float(gap)
    k = round(g)
    if g > 0 and abs(g - k) <= KAY_TOL and k % 2 == 1:
        return (k - 1) // 2
    return None


def validate_kay(s: Spectrum) -> KayWitness:
    """Check that every consecutive gap is an odd positive integer at time pi.

    Raises :class:`GapNotOddInteger` with the 1-based index of the first
    offending gap (gap 1 is ``alpha_2 - alpha_1``).
    """
    scaled = rescale_to_pi(s) if s.readout_time != PI else s
    v = scaled.values
    gaps = tuple(v[i] - v[i - 1] for i in range(1, len(v)))
    ms = []
    for i, g in enumerate(gaps, start=1):
        if g == 0:
            raise NonDistinct("repeated eigenvalue", index=i)
        m = _odd_gap_m(g)
        if m is None:
            raise GapNotOddInteger(i, g)
        ms.append(m)
    scale = s.readout_time.coeff if isinstance(s.readout_time, PiMultiple) else float(s.readout_time) / math.pi
    return KayWitness(gaps=gaps, m_values=tuple(ms), scaled_time=math.pi, scale=scale)


def normalize_parity(s: Spectrum) -> tuple[Spectrum, Scalar]:
    """Shift uniformly so odd-indexed eigenvalues are odd integers.

    Returns the shifted spectrum and the shift.  Laplacian spectra are never
    shifted: they must already be integers starting at 0.  A shifted
    no-potential spectrum is no longer symmetric and is re-tagged as
    plain adjacency.
    """
    validate_kay(s)
    s = rescale_to_pi(s) if s.readout_time != PI else s
    a1 = s.values[0]
    if s.kind is Kind.LAPLACIAN:
        if not _integral(a1) or a1 != 0:
            raise NotIntegerizable("Laplacian spectra must be integers starting at 0")
        return s, Fraction(0) if s.exact else 0.0
    if s.exact:
        base = math.ceil(a1)
        if base % 2 == 0:
            base += 1
        shift = Fraction(base) - a1
        vals = tuple(x + shift for x in s.values)
    else:
        base = math.ceil(float(a1) - KAY_TOL)
        if base % 2 == 0:
            base += 1
        shift = base - float(a1)
        vals = tuple(float(x) + shift for x in s.values)
    if not all(_integral(x) for x in vals):
        raise NotIntegerizable("no uniform shift makes every value an integer")
    kind = s.kind
    if kind is Kind.ADJACENCY_NP and shift != 0:
        kind = Kind.ADJACENCY
    return Spectrum(vals, kind, PI), shift


def _integral(x) -> bool:
    if is_exact(x):
        return Fraction(x).denominator == 1
    return abs(float(x) - round(float(x))) <= KAY_TOL


@dataclass(frozen=True)
class PatternReport:
    betas: tuple
    classes: tuple  # (2*beta) mod 4 for each listed beta
    n: int


def classify_bipartite_pattern(s: Spectrum) -> PatternReport:
    """Residue classes of the non-negative eigenvalues of a loop-free path.

    Each beta is expressed as a multiple of 1/2 and reduced mod 4.  For even
    n the classes must alternate between 1 and 3; for odd n they alternate
    0, 2, 0, ... starting from beta_0 = 0.
    """
    if s.kind is not Kind.ADJACENCY_NP:
        raise PreconditionViolated("pattern check applies to loop-free adjacency spectra")
    s = rescale_to_pi(s) if s.readout_time != PI else s
    betas = s.betas()
    classes = []
    for i, b in enumerate(betas):
        twice = 2 * b
        if not _integral(twice):
            raise PatternViolation(i + 1, f"beta = {b} is not a multiple of 1/2")
        k = int(twice) if s.exact else round(float(twice))
        classes.append(k % 4)
    even = s.n % 2 == 0
    for i, c in enumerate(classes):
        if even:
            if c not in (1, 3):
                raise PatternViolation(i + 1)
            if i and c == classes[i - 1]:
                raise PatternViolation(i + 1)
        else:
            expected = 0 if i % 2 == 0 else 2
            if c != expected:
                raise PatternViolation(i)
    # the alternation is necessary; the odd-gap condition makes it sufficient
    validate_kay(s)
    return PatternReport(betas=betas, classes=tuple(classes), n=s.n)


def parse_values(text: str | Sequence) -> list:
    """Parse a comma separated eigenvalue list such as ``"-3/2,-1/2,1/2,3/2"``."""
    if isinstance(text, str):
        items = [t for t in text.replace(";", ",").split(",") if t.strip()]
    else:
        items = list(text)
    return [parse_scalar(x) for x in items]
