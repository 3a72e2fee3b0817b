"""Lyndon basis of the free Lie ring and integer coordinates in it.

The bracketing of a Lyndon word ``w`` (standard factorization, ``[a, b] =
ab - ba``) expands to ``w`` plus lexicographically larger monomials.  That
unitriangularity lets :func:`lie_coordinates` read coordinates off one at a
time without division.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache, reduce

from .magnus import HomogeneousComponent, Monomial


class NotLieElement(ValueError):
    """The polynomial is not in the span of the Lyndon bracketings."""


class ZeroImage(ValueError):
    pass


def is_lyndon(letters: tuple[int, ...]) -> bool:
    n = len(letters)
    return n > 0 and all(letters < letters[i:] + letters[:i] for i in range(1, n))


@dataclass(frozen=True, order=True)
class LyndonWord:
    letters: tuple[int, ...]

    def __post_init__(self):
        if not is_lyndon(self.letters):
            raise ValueError(f"{self.letters} is not a Lyndon word")

    @property
    def degree(self) -> int:
        return len(self.letters)

    def standard_factorization(self) -> tuple[LyndonWord, LyndonWord]:
        """Split ``w = u v`` with ``v`` the longest proper Lyndon suffix."""
        return _standard_split(self.letters)

    def __str__(self) -> str:
        return " ".join(f"x{i}" for i in self.letters)


def _standard_split(letters: tuple[int, ...]) -> tuple[LyndonWord, LyndonWord]:
    if len(letters) < 2:
        raise ValueError("a single letter has no standard factorization")
    for i in range(1, len(letters)):
        if is_lyndon(letters[i:]):
            return LyndonWord(letters[:i]), LyndonWord(letters[i:])
    raise AssertionError("unreachable: the last letter is always Lyndon")


@lru_cache(maxsize=None)
def _lyndon_upto(d: int, n: int) -> tuple[tuple[int, ...], ...]:
    # Duval's generator: all Lyndon words of length <= n in lexicographic order
    out = []
    w = [0]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < n:
            w.append(w[len(w) - m])
        while w and w[-1] == d:
            w.pop()
    return tuple(out)


@lru_cache(maxsize=None)
def _lyndon_exact(d: int, n: int) -> tuple[LyndonWord, ...]:
    return tuple(LyndonWord(w) for w in _lyndon_upto(d, n) if len(w) == n)


def lyndon_words(d: int, n: int) -> list[LyndonWord]:
    """All Lyndon words of length ``n`` over letters ``1..d``, lexicographically.

    >>> [w.letters for w in lyndon_words(2, 3)]
    [(1, 1, 2), (1, 2, 2)]
    """
    if d < 1 or n < 1:
        raise ValueError("need d >= 1 and n >= 1")
    return list(_lyndon_exact(d, n))


def mobius(n: int) -> int:
    result, k, m = 1, 2, n
    while k * k <= m:
        if m % k == 0:
            m //= k
            if m % k == 0:
                return 0
            result = -result
        k += 1
    if m > 1:
        result = -result
    return result


def witt_number(d: int, n: int) -> int:
    """Rank of the degree-n part of the free Lie ring on ``d`` generators."""
    total = sum(mobius(m) * d ** (n // m) for m in range(1, n + 1) if n % m == 0)
    return total // n


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict[Monomial, int] = defaultdict(int)
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            out[m1 + m2] += c1 * c2
    return out


@lru_cache(maxsize=None)
def _bracket_terms(letters: tuple[int, ...]) -> tuple[tuple[Monomial, int], ...]:
    if len(letters) == 1:
        return ((letters, 1),)
    u, v = _standard_split(letters)
    a = dict(_bracket_terms(u.letters))
    b = dict(_bracket_terms(v.letters))
    out = _poly_mul(a, b)
    for m, c in _poly_mul(b, a).items():
        out[m] -= c
    return tuple(sorted((m, c) for m, c in out.items() if c))


def bracketing(w: LyndonWord, rank: int | None = None) -> HomogeneousComponent:
    """Expand the standard bracketing of ``w`` as a homogeneous polynomial."""
    rank = max(w.letters) if rank is None else rank
    return HomogeneousComponent(rank, w.degree, dict(_bracket_terms(w.letters)))


@dataclass(frozen=True)
class LieVector:
    """Coordinates over the degree-n Lyndon bracketings, in lexicographic order."""

    rank: int
    degree: int
    coords: tuple[int, ...]

    def __post_init__(self):
        expected = witt_number(self.rank, self.degree)
        if len(self.coords) != expected:
            raise ValueError(f"expected {expected} coordinates, got {len(self.coords)}")

    @property
    def basis(self) -> list[LyndonWord]:
        return lyndon_words(self.rank, self.degree)

    def support(self) -> dict[LyndonWord, int]:
        return {w: c for w, c in zip(self.basis, self.coords) if c}

    def content(self) -> int:
        return reduce(math.gcd, self.coords, 0)


def lie_combination(rank: int, degree: int, coords) -> HomogeneousComponent:
    """Inverse of :func:`lie_coordinates`: sum of ``coords[i] * bracketing(w_i)``."""
    out: dict[Monomial, int] = defaultdict(int)
    for w, c in zip(lyndon_words(rank, degree), coords):
        if c:
            for m, t in _bracket_terms(w.letters):
                out[m] += c * t
    return HomogeneousComponent(rank, degree, out)


def lie_coordinates(h: HomogeneousComponent) -> LieVector:
    """Integer coordinates of ``h`` over the Lyndon bracketings of its degree.

    Raises :class:`NotLieElement` if ``h`` is not an integral Lie element.
    """
    remainder: dict[Monomial, int] = defaultdict(int, h.terms)
    coords = []
    for w in lyndon_words(h.rank, h.degree):
        c = remainder.get(w.letters, 0)
        coords.append(c)
        if c:
            for m, t in _bracket_terms(w.letters):
                remainder[m] -= c * t
    leftover = {m: c for m, c in remainder.items() if c}
    if leftover:
        m = min(leftover)
        raise NotLieElement(
            f"degree-{h.degree} polynomial is not a Lie element: "
            f"{len(leftover)} monomials remain, e.g. {m} with coefficient {leftover[m]}"
        )
    return LieVector(h.rank, h.degree, tuple(coords))


def is_proper_power(v: LieVector | tuple[int, ...]) -> bool:
    """True iff ``v`` is ``k * u`` for an integer vector ``u`` and ``k >= 2``."""
    coords = v.coords if isinstance(v, LieVector) else tuple(v)
    g = reduce(math.gcd, coords, 0)
    if g == 0:
        raise ZeroImage("zero vector has no well-defined power structure")
    return g >= 2
