"""Tuples of group elements with product one, and the braid action on them.

A cover of the projective line branched over n marked points is encoded by
its monodromy: a tuple (g_1, ..., g_n) multiplying to the identity.  Vectors
are plain tuples of element indices.  The braid generator sigma_i replaces
(g_i, g_{i+1}) by (g_i g_{i+1} g_i^{-1}, g_i); it preserves the product and
the multiset of conjugacy classes.

Orbit computations are breadth-first closures with lexicographically minimal
canonical representatives, optionally after quotienting by simultaneous
conjugation.  Conjugation commutes with every braid move, so quotienting
before or after taking the closure yields the same partition; the flag is
just a choice of which set the orbits live on.
"""

from __future__ import annotations

import itertools
from collections import deque
from typing import Iterable, Sequence

from .errors import DegreeOverflow
from .groups import FiniteGroup, conjugacy_classes

DEFAULT_TUPLE_CAP = 10**8


def enumerate_hurwitz(
    group: FiniteGroup,
    n: int,
    constraint: Sequence[int] | None = None,
    cap: int = DEFAULT_TUPLE_CAP,
) -> list[tuple[int, ...]]:
    """All product-one n-tuples, lexicographically ordered.

    With a constraint, entry i is restricted to conjugacy class constraint[i].
    The last entry is forced by the first n - 1, so the work is bounded by
    order^(n-1), which must stay within the cap.
    """
    if n < 1:
        raise ValueError(f"need at least one entry, got {n}")
    if constraint is not None and len(constraint) != n:
        raise ValueError(f"constraint length {len(constraint)} does not match n = {n}")
    if group.order ** (n - 1) > cap:
        raise DegreeOverflow(f"{group.order}^{n - 1} exceeds cap {cap}")

    conj = conjugacy_classes(group)
    if constraint is None:
        pools = [range(group.order)] * (n - 1)
    else:
        for c in constraint:
            if not 0 <= c < conj.count:
                raise ValueError(f"no conjugacy class {c}")
        pools = [
            [g for g in range(group.order) if conj.class_of[g] == c]
            for c in constraint[: n - 1]
        ]

    out = []
    for prefix in itertools.product(*pools):
        acc = group.identity
        for g in prefix:
            acc = group.mul(acc, g)
        last = group.inv(acc)
        if constraint is not None and conj.class_of[last] != constraint[n - 1]:
            continue
        out.append(prefix + (last,))
    return out


def braid_generator(group: FiniteGroup, v: tuple[int, ...], i: int) -> tuple[int, ...]:
    """Apply sigma_i (1-based, 1 <= i <= n-1) to the vector."""
    n = len(v)
    if not 1 <= i <= n - 1:
        raise IndexError(f"braid index {i} out of range 1..{n - 1}")
    a, b = v[i - 1], v[i]
    conj_b = group.mul(group.mul(a, b), group.inv(a))
    return v[: i - 1] + (conj_b, a) + v[i + 1 :]


def _braid_generator_inv(group: FiniteGroup, v: tuple[int, ...], i: int) -> tuple[int, ...]:
    a, b = v[i - 1], v[i]
    return v[: i - 1] + (b, group.mul(group.mul(group.inv(b), a), b)) + v[i + 1 :]


def conjugate_vector(group: FiniteGroup, h: int, v: tuple[int, ...]) -> tuple[int, ...]:
    hinv = group.inv(h)
    return tuple(group.mul(group.mul(h, g), hinv) for g in v)


def canonical_under_conjugation(group: FiniteGroup, v: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically minimal simultaneous conjugate of v."""
    return min(conjugate_vector(group, h, v) for h in range(group.order))


def braid_orbits(
    group: FiniteGroup,
    vectors: Iterable[tuple[int, ...]],
    mod_conjugation: bool = False,
) -> list[list[tuple[int, ...]]]:
    """Partition the given vectors into braid orbits.

    With mod_conjugation the orbits live on conjugation classes of vectors,
    each written as its lexicographically minimal representative.  Orbits are
    sorted by their minimal member, members sorted within each orbit, so the
    output is independent of input order and of the closure schedule.
    """
    normalize = (
        (lambda v: canonical_under_conjugation(group, v)) if mod_conjugation else (lambda v: v)
    )
    todo = {normalize(tuple(v)) for v in vectors}
    orbits = []
    while todo:
        seed = min(todo)
        seen = {seed}
        queue = deque([seed])
        while queue:
            v = queue.popleft()
            for i in range(1, len(v)):
                for move in (braid_generator, _braid_generator_inv):
                    w = normalize(move(group, v, i))
                    if w not in seen:
                        seen.add(w)
                        queue.append(w)
        if not seen <= todo:
            raise ValueError("input vectors are not closed under the braid action")
        todo -= seen
        orbits.append(sorted(seen))
    orbits.sort(key=lambda orbit: orbit[0])
    return orbits


def nielsen_count(group: FiniteGroup, classes: Sequence[int], cap: int = DEFAULT_TUPLE_CAP) -> int:
    """Number of product-one tuples with the given per-entry conjugacy classes.

    For an abelian group this is 1 when the classes sum to the identity and 0
    otherwise; in general it is a genuine count.
    """
    conj = conjugacy_classes(group)
    n = len(classes)
    if n < 1:
        raise ValueError("need at least one class")
    work = 1
    for c in classes[:-1]:
        work *= conj.sizes[c]
        if work > cap:
            raise DegreeOverflow(f"class-tuple enumeration exceeds cap {cap}")
    pools = [
        [g for g in range(group.order) if conj.class_of[g] == c]
        for c in classes[:-1]
    ]
    count = 0
    for prefix in itertools.product(*pools):
        acc = group.identity
        for g in prefix:
            acc = group.mul(acc, g)
        if conj.class_of[group.inv(acc)] == classes[-1]:
            count += 1
    return count
