"""Brute-force ground truth and seeded instance generators.

Nothing here uses the group machinery of the main pipeline: groups are held
as explicit element sets and every answer comes from enumerating ground
permutations.  The only shortcut is that a ground element may only map to an
element with the same obviously invariant profile (its degree, or the
colors and sizes of the sets containing it).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import factorial, prod
from typing import Iterator, Sequence

import networkx as nx

from .errors import BudgetExceeded
from .intervalpq import Graph
from .markedreduction import MarkedInstance
from .permgroup import Permutation
from .setfamily import ColoredSetFamily, FamilyEntry


@dataclass(frozen=True)
class OracleBudget:
    max_ground: int = 8
    max_permutations: int = factorial(8)
    seed: int = 0


DEFAULT_BUDGET = OracleBudget()


@dataclass
class BruteGroup:
    """Explicit group of entry permutations plus free copy permutations.

    ``entries`` are the distinct (set, color) pairs with multiplicities;
    ``elements`` holds the induced entry permutations as image tuples.  The
    group acts on ``domain`` (one point per copy), with all permutations of
    copies of one entry allowed.
    """

    domain: list[tuple[int, tuple[int, ...], int]]
    entries: list[tuple[tuple[int, ...], int, int]]
    elements: set[tuple[int, ...]] = field(default_factory=set)

    def order(self) -> int:
        return len(self.elements) * prod(factorial(m) for _, _, m in self.entries)

    def _entry_index(self) -> dict[tuple[tuple[int, ...], int], int]:
        return {(s, c): i for i, (s, c, _) in enumerate(self.entries)}

    def contains(self, p: Permutation) -> bool:
        if p.domain_size != len(self.domain):
            return False
        eidx = self._entry_index()
        images: dict[int, int] = {}
        for i, (c, s, _) in enumerate(self.domain):
            c2, s2, _ = self.domain[p(i)]
            if c2 != c:
                return False
            a, b = eidx[(s, c)], eidx[(s2, c2)]
            if images.setdefault(a, b) != b:
                return False
        return tuple(images[i] for i in range(len(self.entries))) in self.elements

    def generators(self) -> list[Permutation]:
        """Every element lifted copy-for-copy, plus copy transpositions."""
        index = {pt: i for i, pt in enumerate(self.domain)}
        out = []
        for el in sorted(self.elements):
            imgs = []
            for c, s, k in self.domain:
                s2, c2, _ = self.entries[el[self._entry_index()[(s, c)]]]
                imgs.append(index[(c2, s2, k)])
            out.append(Permutation(imgs))
        for s, c, m in self.entries:
            for k in range(m - 1):
                out.append(Permutation.from_cycles(len(self.domain), [(index[(c, s, k)], index[(c, s, k + 1)])]))
        return out

    def is_closed(self) -> bool:
        for x in self.elements:
            inv = [0] * len(x)
            for i, j in enumerate(x):
                inv[j] = i
            if tuple(inv) not in self.elements:
                return False
            for y in self.elements:
                if tuple(y[x[i]] for i in range(len(x))) not in self.elements:
                    return False
        return True


@dataclass
class BruteGraphGroup:
    n: int
    elements: set[tuple[int, ...]]

    def order(self) -> int:
        return len(self.elements)

    def contains(self, p: Permutation) -> bool:
        return p.images in self.elements


def _profile_permutations(profiles: Sequence, budget: OracleBudget) -> Iterator[tuple[int, ...]]:
    """All bijections of ``range(len(profiles))`` preserving the profile of each point."""
    n = len(profiles)
    if n > budget.max_ground:
        raise BudgetExceeded(f"{n} ground elements exceed the budget of {budget.max_ground}")
    classes: dict = {}
    for i, p in enumerate(profiles):
        classes.setdefault(p, []).append(i)
    groups = list(classes.values())
    total = prod(factorial(len(g)) for g in groups)
    if total > budget.max_permutations:
        raise BudgetExceeded(f"{total} candidate permutations exceed the budget")
    for choice in itertools.product(*(itertools.permutations(g) for g in groups)):
        images = [0] * n
        for g, img in zip(groups, choice):
            for a, b in zip(g, img):
                images[a] = b
        yield tuple(images)


def _entries_of(entries: Sequence[FamilyEntry]) -> list[tuple[tuple[int, ...], int, int]]:
    return sorted(((e.members, e.color, e.multiplicity) for e in entries), key=lambda t: (t[1], len(t[0]), t[0]))


def _induced(entries, lookup, sigma) -> tuple[int, ...] | None:
    out = []
    for s, c, m in entries:
        img = tuple(sorted(sigma[x] for x in s))
        j = lookup.get((img, c))
        if j is None or entries[j][2] != m:
            return None
        out.append(j)
    return tuple(out)


def brute_autom_set(family: ColoredSetFamily, budget: OracleBudget = DEFAULT_BUDGET) -> BruteGroup:
    entries = _entries_of(family.entries)
    lookup = {(s, c): i for i, (s, c, _) in enumerate(entries)}
    profiles = []
    for x in range(family.ground_size):
        prof = sorted((c, len(s), m) for s, c, m in entries if x in s)
        gc = family.ground_colors[x] if family.ground_colors is not None else None
        profiles.append((gc, tuple(prof)))
    group = BruteGroup(family.domain(), entries)
    for sigma in _profile_permutations(profiles, budget):
        el = _induced(entries, lookup, sigma)
        if el is not None:
            group.elements.add(el)
    return group


def brute_graph_autom(g: Graph, budget: OracleBudget = DEFAULT_BUDGET) -> BruteGraphGroup:
    degrees = [len(a) for a in g.adjacency]
    out = set()
    for sigma in _profile_permutations(degrees, budget):
        if all(g.has_edge(sigma[u], sigma[v]) for u, v in g.edges):
            out.add(sigma)
    return BruteGraphGroup(g.n, out)


def brute_autom_marked(marked: MarkedInstance, budget: OracleBudget = DEFAULT_BUDGET) -> BruteGroup:
    entries = _entries_of(marked.entries)
    lookup = {(s, c): i for i, (s, c, _) in enumerate(entries)}
    group = BruteGroup(marked.domain(), entries)
    for sigma in brute_graph_autom(marked.graph, budget).elements:
        el = _induced(entries, lookup, sigma)
        if el is not None:
            group.elements.add(el)
    return group


def brute_realizable(
    ground_size: int,
    sets: Sequence[Sequence[int]],
    images: Sequence[int],
    ground_colors: Sequence[int] | None = None,
    budget: OracleBudget = DEFAULT_BUDGET,
) -> bool:
    """Is there a ground permutation mapping ``sets[i]`` onto ``sets[images[i]]`` for all i?"""
    targets = [frozenset(sets[j]) for j in images]
    colors = list(ground_colors) if ground_colors is not None else [0] * ground_size
    for sigma in _profile_permutations(colors, budget):
        if all(frozenset(sigma[x] for x in s) == t for s, t in zip(sets, targets)):
            return True
    return False


def max_antichain(sets: Sequence[Sequence[int]]) -> int:
    """Maximum clique of the incomparability graph of the distinct sets."""
    distinct = list({frozenset(s) for s in sets})
    if not distinct:
        return 0
    g = nx.Graph()
    g.add_nodes_from(range(len(distinct)))
    for i, a in enumerate(distinct):
        for j in range(i + 1, len(distinct)):
            b = distinct[j]
            if not (a <= b or b <= a):
                g.add_edge(i, j)
    return max(len(c) for c in nx.find_cliques(g))


def group_equal(pipeline, brute: BruteGroup) -> bool:
    """Same order and mutual membership of generators."""
    if pipeline.order() != brute.order():
        return False
    if not all(brute.contains(p) for p in pipeline.generators):
        return False
    return all(pipeline.contains(p) for p in brute.generators())


# ---------------------------------------------------------------- generators


def gen_set_family(
    seed: int,
    max_ground: int = 7,
    max_sets: int = 10,
    max_colors: int = 3,
    max_mult: int = 3,
) -> ColoredSetFamily:
    rng = random.Random(seed)
    n = rng.randint(1, max_ground)
    colors = rng.randint(1, max_colors)
    count = rng.randint(1, max_sets)
    style = rng.random()
    raw = []
    for _ in range(count):
        if style < 0.5:
            size = rng.randint(1, n)
        else:
            size = rng.randint(1, max(1, min(n, 3)))
        raw.append((tuple(sorted(rng.sample(range(n), size))), rng.randrange(colors), rng.randint(1, max_mult) if rng.random() < 0.3 else 1))
    return ColoredSetFamily.build(n, raw)


def _interval_cliques(intervals: list[tuple[int, int]]) -> list[frozenset[int]]:
    points = sorted({l for l, _ in intervals})
    covers = {frozenset(i for i, (l, r) in enumerate(intervals) if l <= p <= r) for p in points}
    return [c for c in covers if not any(c < d for d in covers)]


def gen_interval_instance(seed: int, n: int, set_count: int, color_count: int, max_mult: int = 2) -> MarkedInstance:
    rng = random.Random(seed)
    span = max(2, n + rng.randint(0, n))
    intervals = []
    for _ in range(n):
        l = rng.randint(0, span)
        r = min(span, l + rng.randint(0, max(1, span // 2)))
        intervals.append((l, r))
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if intervals[i][0] <= intervals[j][1] and intervals[j][0] <= intervals[i][1]
    ]
    g = Graph.from_edges(n, edges)
    cliques = sorted(_interval_cliques(intervals), key=sorted)
    raw = []
    for _ in range(set_count):
        c = sorted(rng.choice(cliques))
        size = rng.randint(1, len(c))
        mult = rng.randint(1, max_mult) if rng.random() < 0.2 else 1
        raw.append((rng.sample(c, size), rng.randrange(color_count), mult))
    return MarkedInstance.build(g, raw)


def relabel_family(family: ColoredSetFamily, perm: Permutation) -> ColoredSetFamily:
    gc = None
    if family.ground_colors is not None:
        inv = perm.inverse()
        gc = [family.ground_colors[inv(i)] for i in range(family.ground_size)]
    return ColoredSetFamily.build(
        family.ground_size, (([perm(x) for x in e.members], e.color, e.multiplicity) for e in family.entries), gc
    )
