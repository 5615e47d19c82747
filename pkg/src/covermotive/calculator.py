"""Two independent routes to the class of compactified cover moduli.

Route one stratifies: enumerate stable marked trees, keep the admissible
markings, and sum one moduli factor per vertex.  Route two recurses: express
the degree-n class through the composition calculus applied to the open part
and to lower-degree tail classes.  The headline check is that the two routes
agree, degree by degree and group by group; the three stratification
identities (vertex, edge, inner-flag counts against the three recursion
terms) refine that agreement.

Everything is specific to abelian groups: there the smooth cover moduli over
a marking tuple is a product of the marked-point moduli with a finite set of
monodromy tuples, and vertex admissibility needs no ordering of the flags.
Nonabelian input is rejected up front.

Tail tables are built strictly bottom-up: the degree-n comparison consumes
stratification values only in degrees below n, so each level of the ladder
tests the recursion against independently computed lower levels.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import NegativeCoefficient, UnsupportedNonabelian
from .groups import FiniteGroup, class_involution, conjugacy_classes
from .hurwitz import nielsen_count
from .motives import ZERO, EPoly, MotivePoly, class_m0n, to_hodge_euler, to_poincare
from .smodules import (
    Atom,
    SModClass,
    compose,
    day_convolve,
    forget_class,
    shift_root,
    unit_i1,
    unit_i2,
)
from .trees import NTree, enumerate_stable_trees, stratum_class_of_topology


@dataclass(frozen=True)
class Topology:
    """Precomputed combinatorics of one stable tree, for fast marking sweeps."""

    ntree: NTree
    valences: tuple[int, ...]
    stratum: MotivePoly
    # Per edge: labels in the subtree hanging below the edge (away from leaf 1).
    edge_subtrees: tuple[tuple[int, ...], ...]
    # Per vertex: direct leaf labels and (edge index, below_side) incidences.
    vertex_leaves: tuple[tuple[int, ...], ...]
    vertex_edges: tuple[tuple[tuple[int, bool], ...], ...]

    @property
    def vertex_count(self) -> int:
        return len(self.valences)

    @property
    def edge_count(self) -> int:
        return len(self.edge_subtrees)


def _analyze(nt: NTree) -> Topology:
    tree = nt.tree
    v = tree.vertex_count
    valences = tuple(tree.valence(u) for u in range(v))
    root = tree.vertex_of[nt.leaf_of_label(1)]

    # Orient each edge away from the root and collect subtree label sets.
    edges = tree.edges()
    adjacency: dict[int, list[tuple[int, int]]] = {u: [] for u in range(v)}
    for e, (a, b) in enumerate(edges):
        adjacency[tree.vertex_of[a]].append((e, tree.vertex_of[b]))
        adjacency[tree.vertex_of[b]].append((e, tree.vertex_of[a]))

    parent_edge: dict[int, int] = {}
    order = [root]
    seen = {root}
    for u in order:
        for e, other in adjacency[u]:
            if other not in seen:
                seen.add(other)
                parent_edge[other] = e
                order.append(other)

    below: list[set[int]] = [set() for _ in edges]
    vertex_labels = [
        tuple(nt.labels[f] for f in tree.flags_at(u) if tree.j[f] == f) for u in range(v)
    ]
    for u in reversed(order):
        if u == root:
            continue
        e = parent_edge[u]
        below[e].update(vertex_labels[u])
        for e2, other in adjacency[u]:
            if e2 != e and parent_edge.get(other) == e2:
                below[e].update(below[e2])

    vertex_edges = []
    for u in range(v):
        inc = []
        for e, other in adjacency[u]:
            # True when u is the lower endpoint (away from the root).
            inc.append((e, parent_edge.get(u) == e))
        vertex_edges.append(tuple(sorted(set(inc))))

    return Topology(
        ntree=nt,
        valences=valences,
        stratum=stratum_class_of_topology(valences),
        edge_subtrees=tuple(tuple(sorted(s)) for s in below),
        vertex_leaves=tuple(vertex_labels),
        vertex_edges=tuple(vertex_edges),
    )


@dataclass
class StrataSweep:
    """Everything one pass over the admissible markings of degree n yields."""

    n: int
    per_marking: dict[tuple[int, ...], MotivePoly]
    total: MotivePoly
    vertex_weighted: MotivePoly
    edge_weighted: MotivePoly
    inner_flag_weighted: MotivePoly
    topology_count: int
    admissible_count: int
    per_topology_admissible: tuple[int, ...]


@dataclass(frozen=True)
class VerificationReport:
    name: str
    group_name: str
    n: int
    lhs: MotivePoly
    rhs: MotivePoly
    terms: tuple[tuple[str, MotivePoly], ...]

    @property
    def equal(self) -> bool:
        return self.lhs == self.rhs


class Calculator:
    """Shared tables for one abelian group: sweeps, tails, recursion terms."""

    def __init__(self, group: FiniteGroup, tree_cap: int = 9):
        if not group.is_abelian():
            raise UnsupportedNonabelian(
                f"group {group.name} is nonabelian; the cover moduli here "
                f"trivialize only over abelian monodromy"
            )
        self.group = group
        self.conj = conjugacy_classes(group)
        self.iota = class_involution(group)
        self.tree_cap = tree_cap
        self._topologies: dict[int, list[Topology]] = {}
        self._sweeps: dict[int, StrataSweep] = {}
        self._terms: dict[int, tuple[MotivePoly, MotivePoly, MotivePoly]] = {}

    # ---- stratification route ----

    def topologies(self, n: int) -> list[Topology]:
        if n not in self._topologies:
            self._topologies[n] = [_analyze(nt) for nt in enumerate_stable_trees(n, self.tree_cap)]
        return self._topologies[n]

    def sweep(self, n: int) -> StrataSweep:
        """Sum stratum classes over every admissible marking of every topology.

        For each topology and each tuple of leaf classes, the edge marks are
        forced: the class below an edge must invert the sum of the leaf
        classes behind it.  The per-vertex identity check then decides
        admissibility; nothing about the total sum is assumed.
        """
        if n in self._sweeps:
            return self._sweeps[n]
        group, conj = self.group, self.conj
        reps = conj.representatives
        identity = group.identity
        mul = group.mul
        inv = group.inv
        ncls = conj.count

        per_marking: dict[tuple[int, ...], MotivePoly] = {}
        total = ZERO
        v_w = ZERO
        e_w = ZERO
        f_w = ZERO
        per_topology_admissible = []
        admissible_count = 0

        markings = list(_class_tuples(ncls, n))
        for topo in self.topologies(n):
            hits = 0
            stratum = topo.stratum
            n_edges = topo.edge_count
            n_vertices = topo.vertex_count
            for cvec in markings:
                esum = []
                for labels in topo.edge_subtrees:
                    acc = identity
                    for lbl in labels:
                        acc = mul(acc, reps[cvec[lbl - 1]])
                    esum.append(acc)
                ok = True
                for u in range(n_vertices):
                    acc = identity
                    for lbl in topo.vertex_leaves[u]:
                        acc = mul(acc, reps[cvec[lbl - 1]])
                    for e, below_side in topo.vertex_edges[u]:
                        acc = mul(acc, inv(esum[e]) if below_side else esum[e])
                    if acc != identity:
                        ok = False
                        break
                if not ok:
                    continue
                hits += 1
                prev = per_marking.get(cvec, ZERO)
                per_marking[cvec] = prev + stratum
            per_topology_admissible.append(hits)
            admissible_count += hits
            contrib = stratum.scale(hits)
            total = total + contrib
            v_w = v_w + contrib.scale(n_vertices)
            e_w = e_w + contrib.scale(n_edges)
            f_w = f_w + contrib.scale(2 * n_edges)  # flags minus leaves
        sweep = StrataSweep(
            n=n,
            per_marking=per_marking,
            total=total,
            vertex_weighted=v_w,
            edge_weighted=e_w,
            inner_flag_weighted=f_w,
            topology_count=len(self.topologies(n)),
            admissible_count=admissible_count,
            per_topology_admissible=tuple(per_topology_admissible),
        )
        self._sweeps[n] = sweep
        return sweep

    def class_bbar(self, n: int) -> MotivePoly:
        return self.sweep(n).total

    def class_bbar_marked(self, marking: tuple[int, ...]) -> MotivePoly:
        for c in marking:
            if not 0 <= c < self.conj.count:
                raise ValueError(f"no conjugacy class {c}")
        return self.sweep(len(marking)).per_marking.get(tuple(marking), ZERO)

    # ---- open part ----

    def class_b_open_marked(self, marking: tuple[int, ...]) -> MotivePoly:
        """Class of the smooth cover moduli over one marking tuple."""
        count = nielsen_count(self.group, marking)
        return class_m0n(len(marking)).scale(count)

    def class_b_open(self, n: int) -> MotivePoly:
        acc = ZERO
        for cvec in _class_tuples(self.conj.count, n):
            acc = acc + self.class_b_open_marked(cvec)
        return acc

    # ---- tail tables ----

    def tail(self, k: int, c: int) -> MotivePoly:
        """Sum of degree-(k+1) classes over markings with last entry c."""
        if k < 2:
            return ZERO
        acc = ZERO
        for cvec, cls in sorted(self.sweep(k + 1).per_marking.items()):
            if cvec[-1] == c:
                acc = acc + cls
        return acc

    def tail_table(self, n: int) -> dict[tuple[int, int], MotivePoly]:
        return {
            (k, c): self.tail(k, c)
            for k in range(1, n - 1)
            for c in range(self.conj.count)
        }

    # ---- recursion route ----

    def open_module(self, n: int) -> SModClass:
        atoms = []
        for m in range(3, n + 1):
            cls = class_m0n(m)
            for cvec in _class_tuples(self.conj.count, m):
                if nielsen_count(self.group, cvec) == 1:
                    atoms.append(Atom(cvec, (), cls, 1))
        return SModClass(atoms)

    def bbar_module(self, up_to: int) -> SModClass:
        """Stratification classes as generators, degrees 3..up_to."""
        atoms = []
        for k in range(3, up_to + 1):
            for cvec, cls in sorted(self.sweep(k).per_marking.items()):
                atoms.append(Atom(cvec, (), cls, 1))
        return SModClass(atoms)

    def dbar_module(self, n: int) -> SModClass:
        """Rooted tails: degree-k generators from degree-(k+1) classes, k <= n-2."""
        return shift_root(self.bbar_module(n - 1), self.group)

    def terms(self, n: int) -> tuple[MotivePoly, MotivePoly, MotivePoly]:
        """The three recursion terms at degree n (third enters negatively)."""
        if n in self._terms:
            return self._terms[n]
        dbar = self.dbar_module(n)
        slots = unit_i1(self.group).union(dbar)
        term1 = forget_class(compose(self.open_module(n), slots, {n}), n)
        term2 = forget_class(compose(unit_i2(self.group), dbar, {n}), n)
        conv = day_convolve(dbar, dbar, degrees={n})
        pairs = {a.evals for a in unit_i2(self.group).part(2)}
        term3 = ZERO
        for atom in conv.part(n):
            if atom.attach in pairs:
                term3 = term3 + atom.cls.scale(atom.weight)
        self._terms[n] = (term1, term2, term3)
        return self._terms[n]

    def recursion_rhs(self, n: int) -> MotivePoly:
        t1, t2, t3 = self.terms(n)
        return t1 + t2 - t3

    def recursion_refinement(self, n: int) -> dict[tuple[int, ...], MotivePoly]:
        """Per-marking breakdown of the recursion side, for diagnostics."""
        dbar = self.dbar_module(n)
        slots = unit_i1(self.group).union(dbar)
        acc: dict[tuple[int, ...], MotivePoly] = {}

        def add(evals: tuple[int, ...], cls: MotivePoly):
            if not cls.is_zero:
                acc[evals] = acc.get(evals, ZERO) + cls

        for atom in compose(self.open_module(n), slots, {n}).part(n):
            add(atom.evals, atom.cls.scale(atom.weight))
        for atom in compose(unit_i2(self.group), dbar, {n}).part(n):
            add(atom.evals, atom.cls.scale(atom.weight))
        pairs = {a.evals for a in unit_i2(self.group).part(2)}
        for atom in day_convolve(dbar, dbar, degrees={n}).part(n):
            if atom.attach in pairs:
                add(atom.evals, -atom.cls.scale(atom.weight))
        return {c: cls for c, cls in acc.items() if not cls.is_zero}

    # ---- verification ----

    def verify_main_theorem(self, n: int) -> VerificationReport:
        t1, t2, t3 = self.terms(n)
        return VerificationReport(
            name="stratification equals recursion",
            group_name=self.group.name,
            n=n,
            lhs=self.class_bbar(n),
            rhs=t1 + t2 - t3,
            terms=(("slots", t1), ("edge_unit", t2), ("ordered_pairs", t3)),
        )

    def verify_mainprop(self, n: int) -> tuple[VerificationReport, ...]:
        sweep = self.sweep(n)
        t1, t2, t3 = self.terms(n)
        mk = lambda name, lhs, rhs, tag: VerificationReport(
            name=name,
            group_name=self.group.name,
            n=n,
            lhs=lhs,
            rhs=rhs,
            terms=((tag, rhs),),
        )
        return (
            mk("vertex-weighted strata equal slot term", sweep.vertex_weighted, t1, "slots"),
            mk("edge-weighted strata equal edge-unit term", sweep.edge_weighted, t2, "edge_unit"),
            mk(
                "inner-flag-weighted strata equal ordered-pair term",
                sweep.inner_flag_weighted,
                t3,
                "ordered_pairs",
            ),
        )

    def euler_identity_check(self, n: int) -> bool:
        """Per tree: 1 + (#flags - #leaves) = #vertices + #edges."""
        for topo in self.topologies(n):
            tree = topo.ntree.tree
            flags = tree.flag_count
            leaves = len(tree.leaves())
            if 1 + (flags - leaves) != tree.vertex_count + len(tree.edges()):
                return False
        return True


def _class_tuples(ncls: int, n: int):
    """All length-n tuples of class ids, lexicographic."""
    if n == 0:
        yield ()
        return
    for head in _class_tuples(ncls, n - 1):
        for c in range(ncls):
            yield head + (c,)


@lru_cache(maxsize=None)
def get_calculator(group: FiniteGroup) -> Calculator:
    return Calculator(group)


@dataclass
class ClassReport:
    """Everything the report command serializes for one (group, n)."""

    group_name: str
    n: int
    cls: MotivePoly
    hodge_euler: EPoly
    poincare: tuple[int, ...] | None
    per_marking: dict[tuple[int, ...], MotivePoly] | None
    census: dict[str, int]
    verification: VerificationReport | None


def build_report(
    calc: Calculator,
    n: int,
    marking: tuple[int, ...] | None = None,
    with_per_marking: bool = False,
    with_verification: bool = False,
) -> ClassReport:
    if marking is not None:
        cls = calc.class_bbar_marked(marking)
    else:
        cls = calc.class_bbar(n)
    try:
        poincare = to_poincare(cls)
    except NegativeCoefficient:
        poincare = None
    sweep = calc.sweep(n)
    ncls = calc.conj.count
    gerby_total = 0
    for topo in calc.topologies(n):
        gerby_total += ncls ** (n + topo.edge_count)
    census = {
        "topologies": sweep.topology_count,
        "gerby_trees": gerby_total,
        "admissible_strata": sweep.admissible_count,
    }
    return ClassReport(
        group_name=calc.group.name,
        n=n,
        cls=cls,
        hodge_euler=to_hodge_euler(cls),
        poincare=poincare,
        per_marking=dict(sorted(sweep.per_marking.items())) if with_per_marking else None,
        census=census,
        verification=calc.verify_main_theorem(n) if with_verification else None,
    )
