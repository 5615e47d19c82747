"""Independent brute-force oracles used to pin expected values in tests.

Nothing here shares code with the production enumerators: point counts run
over an explicit prime field, and tree counts are produced by generating raw
labeled-tree structures and discarding isomorphic duplicates by exhaustive
bijection search.  Slow on purpose; capped on purpose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import CapExceeded

DEFAULT_POINT_CAP = 10**8
DEFAULT_TREE_CAP = 6


@dataclass(frozen=True)
class PrimeField:
    """The field with p elements, p checked prime by trial division."""

    p: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"{self.p} is not prime")
        d = 2
        while d * d <= self.p:
            if self.p % d == 0:
                raise ValueError(f"{self.p} is not prime: divisible by {d}")
            d += 1

    def elements(self) -> range:
        return range(self.p)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("0 has no inverse")
        return pow(a, self.p - 2, self.p)


def brute_force_m0n_count(n: int, p: int, cap: int = DEFAULT_POINT_CAP) -> int:
    """Count configurations of n distinct marked points on a line over F_p.

    Three points are pinned to 0, 1 and infinity; the remaining n - 3
    coordinates are counted directly: pairwise distinct field elements
    avoiding 0 and 1.
    """
    if n < 3:
        raise ValueError(f"need at least 3 marked points, got {n}")
    field = PrimeField(p)
    if p ** (n - 3) > cap:
        raise CapExceeded(f"{p}^{n - 3} exceeds cap {cap}")
    allowed = [x for x in field.elements() if x not in (0, 1)]
    return sum(1 for _ in itertools.permutations(allowed, n - 3))


def _labeled_trees(v: int) -> list[frozenset[tuple[int, int]]]:
    """All trees on vertices 0..v-1 as edge sets, decoded from Prufer sequences."""
    if v == 1:
        return [frozenset()]
    out = []
    for seq in itertools.product(range(v), repeat=v - 2):
        degree = [1] * v
        for x in seq:
            degree[x] += 1
        edges = set()
        for x in seq:
            leaf = min(u for u in range(v) if degree[u] == 1)
            edges.add((min(leaf, x), max(leaf, x)))
            degree[leaf] -= 1
            degree[x] -= 1
        a, b = (u for u in range(v) if degree[u] == 1)
        edges.add((min(a, b), max(a, b)))
        out.append(frozenset(edges))
    return out


def brute_force_tree_count(n: int, cap: int = DEFAULT_TREE_CAP) -> int:
    """Count stable trees with leaves labeled 1..n up to isomorphism.

    Generates every (tree on v vertices, assignment of leaf labels to
    vertices) pair within the structural bounds, keeps the stable ones, and
    discards duplicates by trying all vertex bijections.
    """
    if n < 3:
        raise ValueError(f"need at least 3 leaves, got {n}")
    if n > cap:
        raise CapExceeded(f"n = {n} exceeds tree oracle cap {cap}")

    retained: list[tuple[int, frozenset[tuple[int, int]], tuple[int, ...]]] = []
    for v in range(1, n - 1):
        for edges in _labeled_trees(v):
            degree = [0] * v
            for a, b in edges:
                degree[a] += 1
                degree[b] += 1
            for assignment in itertools.product(range(v), repeat=n):
                leaf_count = [0] * v
                for vert in assignment:
                    leaf_count[vert] += 1
                if any(degree[w] + leaf_count[w] < 3 for w in range(v)):
                    continue
                cand = (v, edges, assignment)
                if not any(_isomorphic(cand, old) for old in retained):
                    retained.append(cand)
    return len(retained)


def _isomorphic(t1, t2) -> bool:
    v1, edges1, assign1 = t1
    v2, edges2, assign2 = t2
    if v1 != v2 or len(edges1) != len(edges2):
        return False
    for phi in itertools.permutations(range(v1)):
        if any(phi[assign1[i]] != assign2[i] for i in range(len(assign1))):
            continue
        mapped = frozenset((min(phi[a], phi[b]), max(phi[a], phi[b])) for a, b in edges1)
        if mapped == edges2:
            return True
    return False
