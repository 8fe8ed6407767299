"""Automorphisms of colored set families via cardinality Venn diagrams.

A permutation of the member sets is *realizable* when some permutation of
the ground set maps every member onto its image.  The realizable
permutations that also respect colors and multiplicities form the group
computed by :func:`autom_set`, using a tower of subgroups refined one
bounded-index step at a time.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial, log2
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .errors import InternalInvariantError, InvalidFamily, NonStabilizedSubfamily
from .permgroup import Permutation, PermGroup, subgroup_by_membership, symmetric_product

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FamilyEntry:
    members: tuple[int, ...]
    color: int
    multiplicity: int = 1


@dataclass(frozen=True)
class ColoredSetFamily:
    """Ground set ``{0..ground_size-1}`` with colored, possibly repeated sets.

    ``ground_colors`` optionally colors the ground elements; realizing ground
    permutations must then preserve those colors too.
    """

    ground_size: int
    entries: tuple[FamilyEntry, ...]
    ground_colors: tuple[int, ...] | None = None

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if not e.members:
                raise InvalidFamily("member sets must be nonempty")
            if list(e.members) != sorted(set(e.members)):
                raise InvalidFamily(f"member set {e.members} is not strictly sorted")
            if e.members[0] < 0 or e.members[-1] >= self.ground_size:
                raise InvalidFamily(f"member set {e.members} leaves the ground set")
            if e.color < 0:
                raise InvalidFamily("colors must be non-negative")
            if e.multiplicity < 1:
                raise InvalidFamily("multiplicities must be positive")
            if (e.members, e.color) in seen:
                raise InvalidFamily(f"set {e.members} repeated within color {e.color}; use multiplicity")
            seen.add((e.members, e.color))
        if self.ground_colors is not None and len(self.ground_colors) != self.ground_size:
            raise InvalidFamily("ground_colors must color every ground element")

    @classmethod
    def build(
        cls,
        ground_size: int,
        entries: Iterable[tuple[Iterable[int], int] | tuple[Iterable[int], int, int]],
        ground_colors: Sequence[int] | None = None,
    ) -> ColoredSetFamily:
        """Convenience constructor; equal (set, color) pairs are merged into multiplicity."""
        counts: dict[tuple[tuple[int, ...], int], int] = {}
        for item in entries:
            members, color = item[0], item[1]
            mult = item[2] if len(item) > 2 else 1
            key = (tuple(sorted(set(members))), int(color))
            if len(key[0]) != len(list(members)):
                raise InvalidFamily(f"member set {list(members)} has repeated elements")
            counts[key] = counts.get(key, 0) + int(mult)
        ents = tuple(FamilyEntry(m, c, k) for (m, c), k in counts.items())
        gc = tuple(ground_colors) if ground_colors is not None else None
        return cls(ground_size, ents, gc)

    @property
    def color_count(self) -> int:
        return max((e.color for e in self.entries), default=-1) + 1

    def domain(self) -> list[tuple[int, tuple[int, ...], int]]:
        """Multiset domain points ``(color, members, copy)`` in canonical order."""
        pts = [(e.color, e.members, c) for e in self.entries for c in range(e.multiplicity)]
        pts.sort(key=lambda t: (t[0], len(t[1]), t[1], t[2]))
        return pts

    @cached_property
    def max_antichain(self) -> int:
        return max_antichain([e.members for e in self.entries])


@dataclass(frozen=True)
class SimpleFamily:
    """Distinct sets, each in exactly one refined color.

    ``vectors[i]`` is the multiplicity vector of set ``i`` over the input
    colors; it is the data needed to lift a solution back to copies.
    """

    ground_size: int
    sets: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    vectors: tuple[tuple[int, ...], ...]
    ground_colors: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.sets)

    @cached_property
    def incidence(self) -> np.ndarray:
        m = np.zeros((self.ground_size, len(self.sets) + 1), dtype=np.int64)
        for j, s in enumerate(self.sets):
            m[list(s), j] = 1
        if self.ground_colors is not None:
            m[:, -1] = self.ground_colors
        return m

    @cached_property
    def max_antichain(self) -> int:
        return max_antichain(self.sets)


@dataclass(frozen=True)
class CardinalityPartition:
    parts: tuple[tuple[int, ...], ...]

    @property
    def k(self) -> int:
        return len(self.parts)


@dataclass
class VennCellMap:
    """Nonzero cell counts keyed by signature.

    A signature is the sorted tuple of family indices containing an element;
    with ground colors the key is ``(ground color, signature)``.
    """

    cells: dict[tuple, int] = field(default_factory=dict)

    def total(self) -> int:
        return sum(self.cells.values())


@dataclass(frozen=True)
class TowerStep:
    index: int
    parts: tuple[int, ...]
    order: int


@dataclass
class TowerTrace:
    initial_order: int = 1
    antichain: int = 1
    steps: list[TowerStep] = field(default_factory=list)

    @property
    def h(self) -> int:
        return len(self.steps)

    def index_ratios(self) -> list[int]:
        orders = [self.initial_order] + [s.order for s in self.steps]
        return [a // b for a, b in zip(orders, orders[1:])]

    def index_bound(self) -> int:
        a = max(self.antichain, 1)
        return factorial(a) ** a

    def within_bounds(self) -> bool:
        ok_idx = all(r <= self.index_bound() for r in self.index_ratios())
        ok_h = self.h <= (log2(self.initial_order) if self.initial_order > 1 else 0)
        return ok_idx and ok_h


@dataclass(frozen=True)
class AllGood:
    pass


@dataclass(frozen=True)
class Refined:
    part_indices: tuple[int, ...]
    gamma_next: PermGroup


def max_antichain(sets: Iterable[Iterable[int]]) -> int:
    """Largest family of pairwise inclusion-incomparable distinct sets.

    Inclusion is a partial order, so Dilworth's theorem gives the answer as
    the number of sets minus a maximum matching of the strict-inclusion
    relation.
    """
    distinct = sorted({frozenset(s) for s in sets}, key=lambda s: (len(s), sorted(s)))
    if not distinct:
        return 0
    g = nx.Graph()
    left = [("L", i) for i in range(len(distinct))]
    g.add_nodes_from(left)
    g.add_nodes_from(("R", i) for i in range(len(distinct)))
    for i, s in enumerate(distinct):
        for j, t in enumerate(distinct):
            if len(s) < len(t) and s < t:
                g.add_edge(("L", i), ("R", j))
    matching = nx.bipartite.hopcroft_karp_matching(g, top_nodes=left)
    return len(distinct) - len(matching) // 2


def simplify(family: ColoredSetFamily) -> SimpleFamily:
    """Merge repeated sets; refined colors are the distinct multiplicity vectors."""
    m = family.color_count
    vec: dict[tuple[int, ...], list[int]] = {}
    for e in family.entries:
        v = vec.setdefault(e.members, [0] * m)
        v[e.color] += e.multiplicity
    vectors = sorted({tuple(v) for v in vec.values()})
    color_of = {v: i for i, v in enumerate(vectors)}
    rows = sorted(((color_of[tuple(v)], len(s), s, tuple(v)) for s, v in vec.items()))
    return SimpleFamily(
        ground_size=family.ground_size,
        sets=tuple(r[2] for r in rows),
        colors=tuple(r[0] for r in rows),
        vectors=tuple(r[3] for r in rows),
        ground_colors=family.ground_colors,
    )


def cardinality_partition(family: SimpleFamily) -> CardinalityPartition:
    groups: dict[tuple[int, int], list[int]] = {}
    for i, (s, c) in enumerate(zip(family.sets, family.colors)):
        groups.setdefault((c, len(s)), []).append(i)
    return CardinalityPartition(tuple(tuple(groups[k]) for k in sorted(groups)))


def venn_diagram(family: SimpleFamily, subfamily: Sequence[int]) -> VennCellMap:
    sub = sorted(set(subfamily))
    sig: dict[int, list[int]] = {}
    for j in sub:
        for x in family.sets[j]:
            sig.setdefault(x, []).append(j)
    counts: Counter = Counter()
    for x, js in sig.items():
        key = tuple(js)
        if family.ground_colors is not None:
            key = (family.ground_colors[x], key)
        counts[key] += 1
    return VennCellMap(dict(counts))


def _check_stabilizes(subfamily: Sequence[int], rho: Permutation) -> None:
    sub = set(subfamily)
    if {rho(j) for j in sub} != sub:
        raise NonStabilizedSubfamily(f"{rho} does not stabilize subfamily {sorted(sub)}")


def venn_good(family: SimpleFamily, subfamily: Sequence[int], rho: Permutation) -> bool:
    """Every cell of the subfamily has the size of its image cell under ``rho``."""
    _check_stabilizes(subfamily, rho)
    cells = venn_diagram(family, subfamily).cells
    if family.ground_colors is None:
        image = {tuple(sorted(rho(j) for j in k)): v for k, v in cells.items()}
    else:
        image = {(c, tuple(sorted(rho(j) for j in k))): v for (c, k), v in cells.items()}
    return image == cells


def _venn_good_fast(family: SimpleFamily, subfamily: Sequence[int], rho: Permutation) -> bool:
    # Equivalent to venn_good: the multiset of incidence rows restricted to the
    # subfamily must equal the multiset of rows restricted to its image columns.
    m = family.incidence
    cols = list(subfamily)
    img = [rho.images[j] for j in cols]
    if img == cols:
        return True
    if family.ground_colors is not None:
        cols.append(m.shape[1] - 1)
        img.append(m.shape[1] - 1)
    a = m[:, cols]
    b = m[:, img]
    a = a[np.lexsort(a.T[::-1])]
    b = b[np.lexsort(b.T[::-1])]
    return bool(np.array_equal(a, b))


def _fails_with_some(family: SimpleFamily, subfamily: Sequence[int], gens: Sequence[Permutation]) -> bool:
    return any(not _venn_good_fast(family, subfamily, g) for g in gens)


def tower_step(family: SimpleFamily, W: CardinalityPartition, gamma_prev: PermGroup, a: int | None = None) -> AllGood | Refined:
    """One refinement step of the tower.

    Returns :class:`AllGood` when the whole family is Venn-good with every
    generator of ``gamma_prev``; otherwise a strictly smaller subgroup, cut out
    by Venn-goodness of a union of at most ``a`` parts.
    """
    if a is None:
        a = family.max_antichain
    a = max(a, 1)
    parts = W.parts
    k = len(parts)
    gens = [g for g in gamma_prev.generators if not g.is_identity()]
    prefix = [[]]
    for part in parts:
        prefix.append(prefix[-1] + list(part))

    chosen: list[int] = []
    T: list[int] = []
    for p in range(1, a + 1):
        def union(q: int) -> list[int]:
            head = set(prefix[q])
            return prefix[q] + [j for j in T if j not in head]

        # Smallest failing q.  Failure is monotone in q (a Venn-good family stays
        # Venn-good on every stabilized subfamily), so binary search per generator.
        best = k + 1
        for g in gens:
            if best > 1 and not _venn_good_fast(family, union(min(best - 1, k)), g):
                lo, hi = 1, min(best - 1, k)
                while lo < hi:
                    mid = (lo + hi) // 2
                    if _venn_good_fast(family, union(mid), g):
                        lo = mid + 1
                    else:
                        hi = mid
                best = lo
        if best > k:
            if p > 1:
                raise InternalInvariantError("lost a failing subfamily between rounds")
            return AllGood()
        chosen.append(best)
        T = [j for q in chosen for j in parts[q - 1]]
        if best == 1 or p == a:
            break

    if not _fails_with_some(family, T, gens):
        raise InternalInvariantError(f"selected parts {chosen} are Venn-good with every generator")
    bound = factorial(a) ** a
    T_final = list(T)
    gamma_next = subgroup_by_membership(gamma_prev, lambda rho: _venn_good_fast(family, T_final, rho), bound)
    return Refined(tuple(q - 1 for q in chosen), gamma_next)


def expand_solution(simple_group: PermGroup, family: SimpleFamily, original: ColoredSetFamily | None = None) -> PermGroup:
    """Lift a group on distinct sets to the multiset domain of copies."""
    if original is None:
        pts = [
            (color, s, c)
            for s, v in zip(family.sets, family.vectors)
            for color, mult in enumerate(v)
            for c in range(mult)
        ]
        pts.sort(key=lambda t: (t[0], len(t[1]), t[1], t[2]))
    else:
        pts = original.domain()
    index = {p: i for i, p in enumerate(pts)}
    set_index = {s: i for i, s in enumerate(family.sets)}
    n = len(pts)
    gens = []
    for g in simple_group.generators:
        images = [index[(color, family.sets[g(set_index[s])], c)] for color, s, c in pts]
        gens.append(Permutation(images))
    known = simple_group.order()
    for s, v in zip(family.sets, family.vectors):
        for color, mult in enumerate(v):
            if mult >= 2:
                copies = [index[(color, s, c)] for c in range(mult)]
                gens.append(Permutation.from_cycles(n, [copies[:2]]))
                if mult > 2:
                    gens.append(Permutation.from_cycles(n, [copies]))
                known *= factorial(mult)
    return PermGroup(n, gens, known_order=known)


def solve_simple(family: SimpleFamily) -> tuple[PermGroup, TowerTrace]:
    W = cardinality_partition(family)
    a = family.max_antichain
    gamma = symmetric_product([list(p) for p in W.parts], len(family))
    trace = TowerTrace(initial_order=gamma.order(), antichain=a)
    i = 0
    while True:
        result = tower_step(family, W, gamma, a)
        if isinstance(result, AllGood):
            break
        i += 1
        gamma = result.gamma_next
        trace.steps.append(TowerStep(i, result.part_indices, gamma.order()))
        log.debug("tower step %d: parts %s, order %d", i, result.part_indices, gamma.order())
    return gamma, trace


def autom_set(family: ColoredSetFamily) -> tuple[PermGroup, TowerTrace]:
    """Group of realizable color- and multiplicity-preserving permutations.

    The group acts on ``family.domain()``, one point per copy of each set.
    """
    simple = simplify(family)
    gamma, trace = solve_simple(simple)
    return expand_solution(gamma, simple, family), trace
