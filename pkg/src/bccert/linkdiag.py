"""Linking diagrams and the per-prime spanning-subtree primitivity check."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Sequence, Union

INF = "inf"
"""Key for the check with all nonzero labels (primes dividing no label)."""

Edge = tuple[int, int]
PrimeKey = Union[int, str]


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def union(self, a: int, b: int) -> bool:
        """Merge the classes of ``a`` and ``b``; False if already merged."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass(frozen=True)
class LinkingDiagram:
    """Complete graph on link components with pairwise linking numbers."""

    linking: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.linking)
        d = len(rows)
        if d < 1:
            raise ValueError("a link has at least one component")
        for i, row in enumerate(rows):
            if len(row) != d:
                raise ValueError(f"row {i} has length {len(row)}, expected {d}")
            if row[i] != 0:
                raise ValueError(f"diagonal entry ({i},{i}) must be 0")
        for i in range(d):
            for j in range(i + 1, d):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"matrix is not symmetric at ({i},{j})")
        object.__setattr__(self, "linking", rows)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> LinkingDiagram:
        return cls(tuple(tuple(row) for row in matrix))

    @property
    def components(self) -> int:
        return len(self.linking)

    def edges(self) -> list[tuple[int, int, int]]:
        d = self.components
        return [(i, j, self.linking[i][j]) for i in range(d) for j in range(i + 1, d)]


@dataclass(frozen=True)
class LinkVerdict:
    primitive: bool
    failing_prime: PrimeKey | None = None
    witness: dict[PrimeKey, list[Edge]] = field(default_factory=dict)
    disconnected: tuple[tuple[int, ...], tuple[int, ...]] | None = None


def prime_factors(n: int) -> list[int]:
    """Distinct prime divisors of ``|n|`` by trial division."""
    n = abs(n)
    if n.bit_length() > 64:
        warnings.warn(
            "trial-division factorization of a linking number above 2**64 may be slow",
            RuntimeWarning,
            stacklevel=2,
        )
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def relevant_primes(g: LinkingDiagram) -> list[int]:
    """Primes dividing some nonzero linking number, ascending.

    For any other prime the mod-p subgraph is the nonzero-label subgraph,
    which :func:`is_primitive_link` checks once under the key ``INF``.
    """
    primes: set[int] = set()
    for _, _, label in g.edges():
        if label:
            primes.update(prime_factors(label))
    return sorted(primes)


def _spanning_forest(d: int, edges, keep) -> tuple[list[Edge], UnionFind]:
    uf = UnionFind(d)
    tree = []
    for i, j, label in edges:
        if keep(label) and uf.union(i, j):
            tree.append((i, j))
    return tree, uf


def is_primitive_link(g: LinkingDiagram) -> LinkVerdict:
    """Decide whether every prime admits a spanning subtree with labels not
    divisible by that prime.

    Checks the nonzero-label subgraph first, then each relevant prime in
    ascending order; the first disconnected subgraph is reported.
    """
    d = g.components
    if d == 1:
        return LinkVerdict(True)
    edges = g.edges()
    checks: list[tuple[PrimeKey, object]] = [(INF, lambda label: label != 0)]
    for p in relevant_primes(g):
        checks.append((p, lambda label, p=p: label % p != 0))
    witness: dict[PrimeKey, list[Edge]] = {}
    for key, keep in checks:
        tree, uf = _spanning_forest(d, edges, keep)
        if len(tree) != d - 1:
            root = uf.find(0)
            inside = tuple(v for v in range(d) if uf.find(v) == root)
            outside = tuple(v for v in range(d) if uf.find(v) != root)
            return LinkVerdict(False, key, {}, (inside, outside))
        witness[key] = tree
    return LinkVerdict(True, None, witness)
