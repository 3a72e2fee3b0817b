"""Magnus expansion into truncated noncommutative power series over the integers.

Monomials are tuples of 1-based generator indices; the empty tuple is the
constant term.  The Magnus map sends ``x_i`` to ``1 + X_i``, so a word lies in
the n-th term of the lower central series exactly when its expansion is
``1 +`` (terms of degree >= n).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping

from .words import FreeWord

Monomial = tuple[int, ...]

DEFAULT_WEIGHT_CAP = 16


class WeightExceedsCap(ArithmeticError):
    """No nonzero homogeneous layer was found up to the cap."""

    def __init__(self, cap: int):
        super().__init__(f"no nonzero Magnus layer up to degree {cap}")
        self.cap = cap


class TrivialWord(ValueError):
    pass


def _clean(terms: Mapping[Monomial, int]) -> dict[Monomial, int]:
    return {m: c for m, c in terms.items() if c}


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Sparse element of Z<<X_1..X_d>> modulo monomials longer than ``truncation``."""

    rank: int
    truncation: int
    terms: Mapping[Monomial, int]

    def __post_init__(self):
        if self.truncation < 1:
            raise ValueError("truncation must be >= 1")
        clean = {}
        for m, c in self.terms.items():
            if len(m) > self.truncation:
                continue
            if any(not 1 <= i <= self.rank for i in m):
                raise ValueError(f"monomial {m} uses a generator outside 1..{self.rank}")
            if c:
                clean[tuple(m)] = c
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.rank, self.truncation) == (other.rank, other.truncation) and dict(
            self.terms
        ) == dict(other.terms)

    def __hash__(self):
        return hash((self.rank, self.truncation, frozenset(self.terms.items())))

    @classmethod
    def one(cls, rank: int, truncation: int) -> TruncatedSeries:
        return cls(rank, truncation, {(): 1})

    def __mul__(self, other: TruncatedSeries) -> TruncatedSeries:
        return series_mul(self, other)

    def __sub__(self, other: TruncatedSeries) -> TruncatedSeries:
        _check_compatible(self, other)
        out = defaultdict(int, self.terms)
        for m, c in other.terms.items():
            out[m] -= c
        return TruncatedSeries(self.rank, self.truncation, _clean(out))

    def homogeneous(self, degree: int) -> HomogeneousComponent:
        return HomogeneousComponent(
            self.rank, degree, {m: c for m, c in self.terms.items() if len(m) == degree}
        )

    def __repr__(self):
        return f"TruncatedSeries(rank={self.rank}, N={self.truncation}, {format_terms(self.terms)})"


@dataclass(frozen=True, eq=False)
class HomogeneousComponent:
    """Homogeneous noncommutative polynomial of a fixed degree."""

    rank: int
    degree: int
    terms: Mapping[Monomial, int]

    def __post_init__(self):
        clean = {}
        for m, c in self.terms.items():
            if len(m) != self.degree:
                raise ValueError(f"monomial {m} is not of degree {self.degree}")
            if any(not 1 <= i <= self.rank for i in m):
                raise ValueError(f"monomial {m} uses a generator outside 1..{self.rank}")
            if c:
                clean[tuple(m)] = c
        object.__setattr__(self, "terms", clean)

    def __eq__(self, other):
        if not isinstance(other, HomogeneousComponent):
            return NotImplemented
        return (self.rank, self.degree) == (other.rank, other.degree) and dict(
            self.terms
        ) == dict(other.terms)

    def __hash__(self):
        return hash((self.rank, self.degree, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"HomogeneousComponent(rank={self.rank}, degree={self.degree}, {format_terms(self.terms)})"


def format_terms(terms: Mapping[Monomial, int]) -> str:
    if not terms:
        return "0"
    parts = []
    for m in sorted(terms, key=lambda m: (len(m), m)):
        mono = "*".join(f"X{i}" for i in m) or "1"
        parts.append(f"{terms[m]:+d}{'' if not m else '*' + mono}")
    return " ".join(parts)


def _check_compatible(a, b) -> None:
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} != {b.rank}")
    if a.truncation != b.truncation:
        raise ValueError(f"truncation mismatch: {a.truncation} != {b.truncation}")


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product of two truncated series, dropping monomials longer than N."""
    _check_compatible(a, b)
    n = a.truncation
    by_len: list[list[tuple[Monomial, int]]] = [[] for _ in range(n + 1)]
    for m, c in b.terms.items():
        by_len[len(m)].append((m, c))
    out: dict[Monomial, int] = defaultdict(int)
    for m1, c1 in a.terms.items():
        room = n - len(m1)
        for k in range(room + 1):
            for m2, c2 in by_len[k]:
                out[m1 + m2] += c1 * c2
    return TruncatedSeries(a.rank, n, _clean(out))


def _binomial(e: int, j: int) -> int:
    """Generalized binomial coefficient C(e, j) for any integer e and j >= 0."""
    num, den = 1, 1
    for t in range(j):
        num *= e - t
        den *= t + 1
    return num // den


def _power_coefficients(e: int, n: int) -> list[int]:
    # (1 + X)^e = sum_j C(e, j) X^j
    return [_binomial(e, j) for j in range(n + 1)]


def magnus_expand(w: FreeWord, truncation: int) -> TruncatedSeries:
    """Image of ``w`` under ``x_i -> 1 + X_i`` modulo degree > ``truncation``.

    Each syllable ``x_i^e`` contributes ``(1 + X_i)^e``, which for negative
    ``e`` is the alternating inverse series.
    """
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    current: dict[Monomial, int] = {(): 1}
    for gen, exp in w.letters:
        coeffs = _power_coefficients(exp, truncation)
        nxt: dict[Monomial, int] = defaultdict(int)
        for m, c in current.items():
            room = truncation - len(m)
            suffix: Monomial = ()
            for j in range(room + 1):
                if coeffs[j]:
                    nxt[m + suffix] += c * coeffs[j]
                suffix += (gen,)
        current = _clean(nxt)
    return TruncatedSeries(w.rank, truncation, current)


def weight(w: FreeWord, cap: int = DEFAULT_WEIGHT_CAP) -> tuple[int, HomogeneousComponent]:
    """Lower central series weight of ``w`` and its leading Magnus layer.

    Expands at truncation 1, 2, ... and stops at the first degree whose
    homogeneous part is nonzero.

    >>> from bccert.words import reduce
    >>> weight(reduce([(1, 1), (2, 1), (1, -1), (2, -1)]))[0]
    2
    """
    if w.is_identity():
        raise TrivialWord("the identity has no finite weight")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    for n in range(1, cap + 1):
        layer = magnus_expand(w, n).homogeneous(n)
        if not layer.is_zero():
            return n, layer
    raise WeightExceedsCap(cap)
