"""Words in a finitely generated free group and one-relator presentations.

A word is stored as a tuple of ``(generator, exponent)`` syllables with
1-based generator indices.  Free reduction merges adjacent syllables on the
same generator and drops zero exponents, so a reduced word never has two
neighbouring syllables on the same generator.

>>> w = reduce([(1, 1), (2, 1), (2, -1), (1, 1)])
>>> w.letters
((1, 2),)
>>> p = parse_presentation("< x, y | [x,y] >")
>>> p.relator.letters
((1, 1), (2, 1), (1, -1), (2, -1))
>>> str(p)
'< x, y | x y x^-1 y^-1 >'
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Syllable = tuple[int, int]

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class PresentationSyntaxError(ValueError):
    """Malformed presentation text; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class TrivialRelatorError(ValueError):
    pass


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word of the free group of rank ``rank``."""

    letters: tuple[Syllable, ...]
    rank: int

    def __post_init__(self):
        prev = None
        for gen, exp in self.letters:
            if not 1 <= gen <= self.rank:
                raise ValueError(f"generator index {gen} outside 1..{self.rank}")
            if exp == 0:
                raise ValueError("zero exponent in reduced word")
            if gen == prev:
                raise ValueError("adjacent syllables share a generator")
            prev = gen

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: FreeWord) -> FreeWord:
        _check_rank(self, other)
        return reduce(self.letters + other.letters, self.rank)

    def __pow__(self, k: int) -> FreeWord:
        base = self if k >= 0 else self.inverse()
        return reduce(base.letters * abs(k), self.rank)

    def inverse(self) -> FreeWord:
        return FreeWord(tuple((g, -e) for g, e in reversed(self.letters)), self.rank)

    def is_identity(self) -> bool:
        return not self.letters

    def letter_length(self) -> int:
        """Length counted in letters ``x_i^{+-1}`` rather than syllables."""
        return sum(abs(e) for _, e in self.letters)

    @classmethod
    def generator(cls, i: int, rank: int) -> FreeWord:
        return cls(((i, 1),), rank)

    @classmethod
    def identity(cls, rank: int) -> FreeWord:
        return cls((), rank)

    def format(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = default_names(self.rank)
        if not self.letters:
            return "1"
        parts = []
        for g, e in self.letters:
            parts.append(names[g - 1] if e == 1 else f"{names[g - 1]}^{e}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.format()


def _check_rank(a: FreeWord, b: FreeWord) -> None:
    if a.rank != b.rank:
        raise ValueError(f"rank mismatch: {a.rank} != {b.rank}")


def default_names(rank: int) -> tuple[str, ...]:
    return tuple(f"x{i}" for i in range(1, rank + 1))


def reduce(letters: Iterable[Syllable], rank: int | None = None) -> FreeWord:
    """Freely reduce a raw syllable sequence.

    Zero exponents are dropped and neighbouring syllables on one generator are
    merged, with a stack so that cancellations cascade.  When ``rank`` is
    omitted the largest generator index seen is used.
    """
    stack: list[list[int]] = []
    top = 0
    for gen, exp in letters:
        top = max(top, gen)
        if exp == 0:
            continue
        if stack and stack[-1][0] == gen:
            stack[-1][1] += exp
            if stack[-1][1] == 0:
                stack.pop()
        else:
            stack.append([gen, exp])
    if rank is None:
        rank = max(top, 1)
    return FreeWord(tuple((g, e) for g, e in stack), rank)


def is_cyclically_reduced(w: FreeWord) -> bool:
    if len(w.letters) < 2:
        return True
    (g0, e0), (g1, e1) = w.letters[0], w.letters[-1]
    return g0 != g1 or (e0 > 0) == (e1 > 0)


def cyclic_reduce(w: FreeWord) -> FreeWord:
    """Return a cyclically reduced conjugate of the freely reduced word ``w``.

    The result is a subword of ``w`` up to merging the outer syllables, and
    ``w == g * cyclic_reduce(w) * g.inverse()`` for the stripped prefix ``g``.

    >>> str(cyclic_reduce(reduce([(1, 2), (2, 1), (1, -2)])))
    'x2'
    """
    return split_conjugate(w)[1]


def split_conjugate(w: FreeWord) -> tuple[FreeWord, FreeWord]:
    """Decompose ``w = g c g^-1`` letterwise with ``c`` cyclically reduced."""
    letters = list(w.letters)
    prefix: list[Syllable] = []
    while len(letters) >= 2:
        (g0, e0), (g1, e1) = letters[0], letters[-1]
        if g0 != g1 or (e0 > 0) == (e1 > 0):
            break
        # x^a M x^b with opposite signs: strip x^s from the front and x^-s from the back
        s = min(abs(e0), abs(e1)) * (1 if e0 > 0 else -1)
        prefix.append((g0, s))
        head, tail = e0 - s, e1 + s
        letters = ([(g0, head)] if head else []) + letters[1:-1] + ([(g1, tail)] if tail else [])
    return reduce(prefix, w.rank), FreeWord(tuple(letters), w.rank)


def exponent_sums(w: FreeWord) -> tuple[int, ...]:
    """Image of ``w`` in the abelianization, in the basis of generators."""
    sums = [0] * w.rank
    for g, e in w.letters:
        sums[g - 1] += e
    return tuple(sums)


def commutator(a: FreeWord, b: FreeWord) -> FreeWord:
    """``[a, b] = a b a^-1 b^-1``."""
    _check_rank(a, b)
    return reduce(a.letters + b.letters + a.inverse().letters + b.inverse().letters, a.rank)


@dataclass(frozen=True)
class Presentation:
    """A one-relator presentation with a cyclically reduced nontrivial relator."""

    rank: int
    relator: FreeWord
    names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError("a presentation needs at least one generator")
        if self.relator.rank != self.rank:
            raise ValueError("relator rank differs from presentation rank")
        if self.relator.is_identity():
            raise TrivialRelatorError("relator is trivial")
        if not is_cyclically_reduced(self.relator):
            raise ValueError("relator is not cyclically reduced")
        if not self.names:
            object.__setattr__(self, "names", default_names(self.rank))
        elif len(self.names) != self.rank:
            raise ValueError("number of generator names differs from rank")

    def __str__(self) -> str:
        return f"< {', '.join(self.names)} | {self.relator.format(self.names)} >"


# -- parsing -----------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<int>[+-]?\d+)|(?P<op>[<>|,\[\]()^*.]))"
)


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(text) and text[pos].isspace():
                pos += 1
            if pos >= len(text):
                break
            m = _TOKEN_RE.match(text, pos)
            if m is None:
                raise PresentationSyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0
        self.gens: dict[str, int] = {}

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        tok = self.peek()
        return tok[2] if tok else len(self.text)

    def expect(self, value: str) -> None:
        tok = self.peek()
        if tok is None or tok[1] != value:
            found = "end of input" if tok is None else repr(tok[1])
            raise PresentationSyntaxError(f"expected {value!r}, found {found}", self.pos())
        self.i += 1

    def at(self, value: str) -> bool:
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == value

    def presentation(self) -> tuple[list[str], list[Syllable]]:
        self.expect("<")
        names: list[str] = []
        while True:
            tok = self.peek()
            if tok is None or tok[0] != "name":
                raise PresentationSyntaxError("expected generator name", self.pos())
            if tok[1] in self.gens:
                raise PresentationSyntaxError(f"generator {tok[1]!r} declared twice", tok[2])
            self.gens[tok[1]] = len(names) + 1
            names.append(tok[1])
            self.i += 1
            if self.at(","):
                self.i += 1
                continue
            break
        self.expect("|")
        word = self.word(stop=(">",))
        self.expect(">")
        if self.peek() is not None:
            raise PresentationSyntaxError("trailing input after '>'", self.pos())
        return names, word

    def word(self, stop: tuple[str, ...]) -> list[Syllable]:
        out: list[Syllable] = []
        while True:
            tok = self.peek()
            if tok is None or (tok[0] == "op" and tok[1] in stop):
                return out
            if self.at("*") or self.at("."):
                self.i += 1
                continue
            out.extend(self.factor())

    def factor(self) -> list[Syllable]:
        tok = self.peek()
        if tok is None:
            raise PresentationSyntaxError("unexpected end of input", len(self.text))
        kind, value, pos = tok
        if kind == "name":
            if value not in self.gens:
                raise PresentationSyntaxError(f"generator {value!r} not declared", pos)
            self.i += 1
            base = [(self.gens[value], 1)]
        elif kind == "int" and value == "1":
            # the identity element
            self.i += 1
            base = []
        elif value == "(":
            self.i += 1
            base = self.word(stop=(")",))
            self.expect(")")
        elif value == "[":
            self.i += 1
            a = self.word(stop=(",",))
            self.expect(",")
            b = self.word(stop=("]",))
            self.expect("]")
            base = a + b + _inv(a) + _inv(b)
        else:
            raise PresentationSyntaxError(f"unexpected token {value!r}", pos)
        if self.at("^"):
            self.i += 1
            tok = self.peek()
            if tok is None or tok[0] != "int":
                raise PresentationSyntaxError("expected integer exponent", self.pos())
            self.i += 1
            k = int(tok[1])
            base = (base if k >= 0 else _inv(base)) * abs(k)
        return base


def _inv(letters: list[Syllable]) -> list[Syllable]:
    return [(g, -e) for g, e in reversed(letters)]


def parse_presentation(text: str) -> Presentation:
    """Parse ``< x1, x2, ... | word >`` into a one-relator presentation.

    The word may use juxtaposition (or ``*``), ``x^k`` with integer ``k``,
    parenthesized subwords and commutators ``[a,b] = a b a^-1 b^-1``.  The
    relator is freely and cyclically reduced; a trivial relator is an error.
    """
    parser = _Parser(text)
    names, raw = parser.presentation()
    rank = len(names)
    relator = cyclic_reduce(reduce(raw, rank))
    if relator.is_identity():
        raise TrivialRelatorError("relator is trivial after reduction")
    return Presentation(rank, relator, tuple(names))
