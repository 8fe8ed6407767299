"""Automorphisms of an interval graph acting on colored families of marked cliques.

The graph's PQ-tree is compressed: subtrees whose inner vertices avoid every
marked set ("clean" subtrees) are replaced by canonical codes stored on their
parents.  Each remaining node ``q`` contributes the set ``C_q`` of vertices in
its descendant cliques.  The marked sets, refined by a per-level annotation,
and the ``C_q`` sets form a colored set family whose automorphism group,
restricted to the marked sets, is the answer.

Two safeguards make the result exact.  Ground elements are colored by
automorphism-invariant tree data.  Every generator of the restricted group
is then certified by comparing labeled canonical codes.  If a generator fails,
the group is cut down by a coset search with the exact test as membership
predicate.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InternalInvariantError, InvalidFamily, MarkedSetNotClique
from .intervalpq import LEAF, PNODE, QNODE, Graph, PQTree, _Coder, build_pq_tree
from .permgroup import Permutation, PermGroup, restrict, subgroup_by_membership
from .setfamily import ColoredSetFamily, FamilyEntry, TowerTrace, autom_set

log = logging.getLogger(__name__)

PLACEHOLDER = ("*",)


@dataclass(frozen=True)
class MarkedInstance:
    graph: Graph
    entries: tuple[FamilyEntry, ...]

    def __post_init__(self):
        seen = set()
        for e in self.entries:
            if not e.members:
                raise InvalidFamily("marked sets must be nonempty")
            if list(e.members) != sorted(set(e.members)):
                raise InvalidFamily(f"marked set {e.members} is not strictly sorted")
            if e.members[0] < 0 or e.members[-1] >= self.graph.n:
                raise InvalidFamily(f"marked set {e.members} leaves the vertex set")
            if e.multiplicity < 1 or e.color < 0:
                raise InvalidFamily("colors must be non-negative and multiplicities positive")
            if (e.members, e.color) in seen:
                raise InvalidFamily(f"marked set {e.members} repeated within color {e.color}")
            seen.add((e.members, e.color))

    @classmethod
    def build(cls, graph: Graph, entries: Iterable[tuple]) -> MarkedInstance:
        counts: dict[tuple[tuple[int, ...], int], int] = {}
        for item in entries:
            members, color = item[0], item[1]
            mult = item[2] if len(item) > 2 else 1
            key = (tuple(sorted(set(members))), int(color))
            counts[key] = counts.get(key, 0) + int(mult)
        return cls(graph, tuple(FamilyEntry(m, c, k) for (m, c), k in counts.items()))

    def domain(self) -> list[tuple[int, tuple[int, ...], int]]:
        """Points ``(color, marked set, copy)`` in canonical order."""
        pts = [(e.color, e.members, c) for e in self.entries for c in range(e.multiplicity)]
        pts.sort(key=lambda t: (t[0], len(t[1]), t[1], t[2]))
        return pts

    def marked_union(self) -> frozenset[int]:
        return frozenset(v for e in self.entries for v in e.members)

    def check_cliques(self) -> None:
        for e in self.entries:
            for i, u in enumerate(e.members):
                for v in e.members[i + 1:]:
                    if not self.graph.has_edge(u, v):
                        raise MarkedSetNotClique(
                            f"marked set {{{', '.join(self.graph.name(x) for x in e.members)}}} is not a clique"
                        )

    def relabel(self, perm: Permutation) -> MarkedInstance:
        g = self.graph.relabel(perm)
        return MarkedInstance.build(g, [([perm(v) for v in e.members], e.color, e.multiplicity) for e in self.entries])


@dataclass(frozen=True)
class SetAnnotation:
    """Per level: (depth, number of inner vertices there, rank profile at Q-nodes)."""

    levels: tuple[tuple[int, int, tuple], ...]


@dataclass(frozen=True)
class NodeAnnotation:
    """Kind and canonical code of a non-clean node with its clean subtrees.

    Non-clean children appear in the code as a placeholder, so for Q-nodes the
    code also fixes their positions in the canonical child order;
    ``positions`` repeats them as palindromic indices.
    """

    kind: str
    code: tuple
    positions: tuple[int, ...] = ()


@dataclass
class CleanInfo:
    clean_node: dict[int, bool]
    clean_subtree: dict[int, bool]
    kept: list[int]

    def clean_roots(self, tree: PQTree) -> list[int]:
        """Roots of the maximal clean subtrees."""
        out = []
        for node, ok in self.clean_subtree.items():
            parent = tree.parent(node)
            if ok and (parent is None or not self.clean_subtree[parent]):
                out.append(node)
        return sorted(out)


@dataclass
class ReducedInstance:
    set_instance: ColoredSetFamily
    b_colors: int
    a_domain: list[int]
    c_nodes: dict[int, frozenset[int]]
    set_annotations: dict[tuple[tuple[int, ...], int], SetAnnotation]
    node_annotations: dict[int, NodeAnnotation]
    tree: PQTree
    clean: CleanInfo

    def c_family(self) -> list[frozenset[int]]:
        return list(self.c_nodes.values())


@dataclass
class MarkedResult:
    group: PermGroup
    trace: TowerTrace | None = None
    certified: bool = True
    fallback: bool = False
    reduced: ReducedInstance | None = None
    notes: list[str] = field(default_factory=list)


def classify_clean(tree: PQTree, marked: MarkedInstance) -> CleanInfo:
    union = marked.marked_union()
    clean_node = {nd.id: not (set(tree.inner_vertices[nd.id]) & union) for nd in tree.nodes}
    clean_subtree: dict[int, bool] = {}
    for node in tree.postorder():
        clean_subtree[node] = clean_node[node] and all(clean_subtree[c] for c in tree.children(node))
    kept = sorted(n for n, ok in clean_subtree.items() if not ok)
    return CleanInfo(clean_node, clean_subtree, kept)


def annotate_set(tree: PQTree, members: Sequence[int]) -> SetAnnotation:
    nodes = {tree.inner_of[v] for v in members}
    deepest = max(nodes, key=lambda x: tree.depth[x])
    path = set(tree.ancestors(deepest))
    if not nodes <= path:
        raise InternalInvariantError("inner vertices of a clique are not on one root-to-leaf path")
    per_level: dict[int, list[int]] = {}
    for v in members:
        per_level.setdefault(tree.depth[tree.inner_of[v]], []).append(v)
    levels = []
    for d in sorted(per_level):
        vs = per_level[d]
        node = tree.inner_of[vs[0]]
        profile: tuple = ()
        if tree.kind(node) == QNODE:
            profile = tuple(sorted(Counter(tree.rank_of[v].indices for v in vs).items()))
        levels.append((d, len(vs), profile))
    return SetAnnotation(tuple(levels))


def annotate_sets(tree: PQTree, marked: MarkedInstance) -> dict[tuple[tuple[int, ...], int], SetAnnotation]:
    marked.check_cliques()
    return {(e.members, e.color): annotate_set(tree, e.members) for e in marked.entries}


def node_sets(tree: PQTree, kept: Iterable[int]) -> dict[int, frozenset[int]]:
    return {q: tree.vertices_under(q) for q in kept}


def _annotation_coder(tree: PQTree, clean: CleanInfo) -> _Coder:
    placeholder = {n: PLACEHOLDER for n, ok in clean.clean_subtree.items() if not ok}
    return _Coder(tree, placeholder=placeholder)


def annotate_node(tree: PQTree, q: int, clean: CleanInfo, coder: _Coder | None = None) -> NodeAnnotation:
    coder = coder or _annotation_coder(tree, clean)
    kind = tree.kind(q)
    ch = tree.children(q)
    # the node itself is never replaced by the placeholder
    saved = coder.placeholder.pop(q, None)
    try:
        if kind == LEAF:
            code = (LEAF, tuple(0 for _ in tree.inner_vertices[q]))
            return NodeAnnotation(kind, code)
        if kind == PNODE:
            labels = tuple(0 for _ in tree.inner_vertices[q])
            code = (PNODE, labels, tuple(sorted(coder.code(c) for c in ch)))
            return NodeAnnotation(kind, code)
        fwd, rev = coder.oriented(q, False), coder.oriented(q, True)
        best = min(fwd, rev)
        m = len(ch)
        positions = tuple(sorted(min(i, m - 1 - i) + 1 for i, c in enumerate(ch) if not clean.clean_subtree[c]))
        return NodeAnnotation(kind, (QNODE, best), positions)
    finally:
        if saved is not None:
            coder.placeholder[q] = saved


def _ground_colors(tree: PQTree, clean: CleanInfo, coder: _Coder) -> tuple[int, ...]:
    keys = []
    for v in range(tree.graph.n):
        node = tree.inner_of[v]
        kind = tree.kind(node)
        detail: tuple = tree.rank_of[v].indices
        if kind == QNODE and not clean.clean_subtree[node]:
            saved = coder.placeholder.pop(node, None)
            try:
                if not coder.symmetric(node):
                    l, r = tree.span_of[v]
                    m = len(tree.children(node))
                    if coder.is_reversed(node):
                        l, r = m - 1 - r, m - 1 - l
                    detail = ("span", l, r)
            finally:
                if saved is not None:
                    coder.placeholder[node] = saved
        keys.append((tree.depth[node], kind, detail))
    ids = {k: i for i, k in enumerate(sorted(set(keys), key=repr))}
    return tuple(ids[k] for k in keys)


def reduce(marked: MarkedInstance, ground_colors: bool = True) -> ReducedInstance:
    """Build the colored set family over V(G) whose solution restricts to the answer."""
    tree = build_pq_tree(marked.graph)
    set_ann = annotate_sets(tree, marked)
    clean = classify_clean(tree, marked)
    coder = _annotation_coder(tree, clean)
    node_ann = {q: annotate_node(tree, q, clean, coder) for q in clean.kept}
    c_nodes = node_sets(tree, clean.kept)

    b_keys = sorted({(e.color, set_ann[(e.members, e.color)]) for e in marked.entries}, key=repr)
    b_id = {k: i for i, k in enumerate(b_keys)}
    c_keys = sorted({node_ann[q].code for q in clean.kept}, key=repr)
    c_id = {k: len(b_keys) + i for i, k in enumerate(c_keys)}

    entries: list[tuple] = []
    for e in marked.entries:
        entries.append((e.members, b_id[(e.color, set_ann[(e.members, e.color)])], e.multiplicity))
    for q in clean.kept:
        entries.append((sorted(c_nodes[q]), c_id[node_ann[q].code], 1))
    gc = _ground_colors(tree, clean, coder) if ground_colors else None
    family = ColoredSetFamily.build(marked.graph.n, entries, gc)

    index = {p: i for i, p in enumerate(family.domain())}
    bcol = {(e.members, e.color): b_id[(e.color, set_ann[(e.members, e.color)])] for e in marked.entries}
    a_domain = [index[(bcol[(s, c)], s, k)] for c, s, k in marked.domain()]
    return ReducedInstance(family, len(b_keys), a_domain, c_nodes, set_ann, node_ann, tree, clean)


def _labels(marked: MarkedInstance, set_ids: dict[tuple[int, ...], int]) -> list[tuple[int, ...]]:
    lab: list[list[int]] = [[] for _ in range(marked.graph.n)]
    for s, i in set_ids.items():
        for v in s:
            lab[v].append(i)
    return [tuple(sorted(x)) for x in lab]


def exact_membership(marked: MarkedInstance, tree: PQTree | None = None):
    """Predicate deciding whether a permutation of the marked domain is realized
    by a marking-preserving automorphism of the graph."""
    tree = tree or build_pq_tree(marked.graph)
    pts = marked.domain()
    distinct = sorted({s for _, s, _ in pts})
    set_ids = {s: i for i, s in enumerate(distinct)}
    base_labels = _labels(marked, set_ids)
    base_code = _Coder(tree, label=lambda v: base_labels[v]).code(tree.root)

    def predicate(gamma: Permutation) -> bool:
        set_map: dict[tuple[int, ...], tuple[int, ...]] = {}
        for i, (c, s, _) in enumerate(pts):
            c2, s2, _ = pts[gamma(i)]
            if c2 != c or set_map.setdefault(s, s2) != s2:
                return False
        if len(set(set_map.values())) != len(set_map):
            return False
        moved = _labels(marked, {set_map[s]: set_ids[s] for s in distinct})
        return _Coder(tree, label=lambda v: moved[v]).code(tree.root) == base_code

    return predicate


def autom_marked_int_result(marked: MarkedInstance, strict: bool = True) -> MarkedResult:
    """Full solver output.  ``strict=False`` skips ground colors and certification."""
    if not marked.entries:
        build_pq_tree(marked.graph)
        return MarkedResult(PermGroup(0, []), None, notes=["empty marked family: trivial group on an empty domain"])
    marked.check_cliques()
    reduced = reduce(marked, ground_colors=strict)
    group, trace = autom_set(reduced.set_instance)
    gamma = restrict(group, reduced.a_domain)
    result = MarkedResult(gamma, trace, reduced=reduced)
    if not strict:
        result.certified = False
        return result
    pred = exact_membership(marked, reduced.tree)
    if all(pred(g) for g in gamma.generators):
        return result
    log.info("reduction over-approximated the group; falling back to a coset search")
    exact = subgroup_by_membership(gamma, pred, gamma.order())
    result.group = exact
    result.fallback = True
    result.notes.append(f"certification failed; coset search cut the order from {gamma.order()} to {exact.order()}")
    return result


def autom_marked_int(marked: MarkedInstance, strict: bool = True) -> PermGroup:
    """Group of permutations of the marked domain induced by marking-preserving
    automorphisms of the graph, acting on ``marked.domain()``."""
    return autom_marked_int_result(marked, strict).group
