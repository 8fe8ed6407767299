"""Interval graphs: maximal cliques, PQ-trees, canonical codes and automorphisms.

The PQ-tree is built over the maximal cliques.  Each vertex ``v`` induces the
set ``S_v`` of cliques containing it, and the cliques must be ordered so that
every ``S_v`` is consecutive.  Unions of overlap components of the ``S_v``
form a laminar family; components with two or more sets become Q-nodes and
everything else becomes P-nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .errors import EmptyGraph, InternalInvariantError, NotChordal, NotInterval
from .permgroup import Permutation, PermGroup

LEAF, PNODE, QNODE = "L", "P", "Q"


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u}, {v}) must satisfy 0 <= u < v < n")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("one label per vertex is required")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> Graph:
        es = frozenset((min(u, v), max(u, v)) for u, v in edges)
        return cls(n, es, tuple(labels) if labels is not None else None)

    @classmethod
    def from_cliques(cls, cliques: Iterable[Iterable], labels: Sequence[str] | None = None) -> Graph:
        """Union of complete graphs; clique members are indices or labels."""
        cliques = [list(c) for c in cliques]
        if labels is None:
            n = 1 + max((v for c in cliques for v in c), default=-1)
            index = {i: i for i in range(n)}
        else:
            n = len(labels)
            index = {lab: i for i, lab in enumerate(labels)}
        edges = set()
        for c in cliques:
            ids = sorted(index[x] for x in c)
            edges.update((a, b) for i, a in enumerate(ids) for b in ids[i + 1:])
        return cls.from_edges(n, edges, labels)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def name(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def relabel(self, perm: Permutation) -> Graph:
        """Graph with vertex ``v`` renamed to ``perm(v)``; labels travel along."""
        labels = None
        if self.labels is not None:
            inv = perm.inverse()
            labels = tuple(self.labels[inv(i)] for i in range(self.n))
        return Graph.from_edges(self.n, ((perm(u), perm(v)) for u, v in self.edges), labels)

    def is_automorphism(self, p: Permutation) -> bool:
        return all(self.has_edge(p(u), p(v)) for u, v in self.edges)


@dataclass(frozen=True)
class RankDescriptor:
    """Sorted multiset of palindromic child indices; empty for P-nodes and leaves."""

    indices: tuple[int, ...] = ()

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.indices)) + "}"


@dataclass
class PQNode:
    id: int
    kind: str
    children: list[int] = field(default_factory=list)
    parent: int | None = None
    clique: int | None = None


@dataclass
class PQTree:
    graph: Graph
    cliques: list[frozenset[int]]
    nodes: list[PQNode]
    root: int
    inner_of: dict[int, int] = field(default_factory=dict)
    span_of: dict[int, tuple[int, int] | None] = field(default_factory=dict)
    rank_of: dict[int, RankDescriptor] = field(default_factory=dict)

    def kind(self, node: int) -> str:
        return self.nodes[node].kind

    def children(self, node: int) -> list[int]:
        return self.nodes[node].children

    def parent(self, node: int) -> int | None:
        return self.nodes[node].parent

    @cached_property
    def depth(self) -> dict[int, int]:
        out = {self.root: 0}
        stack = [self.root]
        while stack:
            x = stack.pop()
            for c in self.nodes[x].children:
                out[c] = out[x] + 1
                stack.append(c)
        return out

    @cached_property
    def inner_vertices(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {nd.id: [] for nd in self.nodes}
        for v in range(self.graph.n):
            out[self.inner_of[v]].append(v)
        return out

    def leaves_under(self, node: int) -> list[int]:
        """Clique indices below ``node`` in frontier order."""
        nd = self.nodes[node]
        if nd.kind == LEAF:
            return [nd.clique]
        return [c for ch in nd.children for c in self.leaves_under(ch)]

    def frontier(self) -> list[int]:
        return self.leaves_under(self.root)

    def vertices_under(self, node: int) -> frozenset[int]:
        """Union of the maximal cliques at descendant leaves."""
        return frozenset().union(*(self.cliques[c] for c in self.leaves_under(node)))

    def leaf_of_clique(self, clique: int) -> int:
        for nd in self.nodes:
            if nd.kind == LEAF and nd.clique == clique:
                return nd.id
        raise KeyError(clique)

    def ancestors(self, node: int) -> list[int]:
        """Path from the root down to ``node`` inclusive."""
        path = [node]
        while self.nodes[path[-1]].parent is not None:
            path.append(self.nodes[path[-1]].parent)
        return path[::-1]

    def postorder(self) -> list[int]:
        out: list[int] = []

        def rec(x: int):
            for c in self.nodes[x].children:
                rec(c)
            out.append(x)

        rec(self.root)
        return out

    def describe(self, node: int | None = None, indent: int = 0) -> str:
        """Plain-text dump, one node per line."""
        node = self.root if node is None else node
        nd = self.nodes[node]
        name = self.graph.name
        if nd.kind == LEAF:
            members = "".join(name(v) for v in sorted(self.cliques[nd.clique]))
            inner = ",".join(name(v) for v in self.inner_vertices[node])
            line = " " * indent + f"L [{members}]" + (f" inner={inner}" if inner else "")
            return line
        inner = ",".join(name(v) for v in self.inner_vertices[node])
        lines = [" " * indent + f"{nd.kind} inner={{{inner}}}"]
        lines += [self.describe(c, indent + 2) for c in nd.children]
        return "\n".join(lines)

    def to_dot(self) -> str:
        name = self.graph.name
        lines = ["digraph pqtree {", "  node [fontname=Helvetica];"]
        for nd in self.nodes:
            inner = " ".join(name(v) for v in self.inner_vertices[nd.id])
            if nd.kind == LEAF:
                label = " ".join(name(v) for v in sorted(self.cliques[nd.clique]))
                lines.append(f'  n{nd.id} [shape=plaintext, label="{label}"];')
            else:
                shape = "triangle" if nd.kind == PNODE else "box"
                lines.append(f'  n{nd.id} [shape={shape}, label="{inner}"];')
        for nd in self.nodes:
            for c in nd.children:
                lines.append(f"  n{nd.id} -> n{c};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- cliques


def lex_bfs(g: Graph) -> list[int]:
    """Lexicographic breadth-first search order (partition refinement)."""
    order: list[int] = []
    parts: list[list[int]] = [list(range(g.n))] if g.n else []
    while parts:
        v = parts[0].pop(0)
        if not parts[0]:
            parts.pop(0)
        order.append(v)
        nbrs = g.adjacency[v]
        refined = []
        for part in parts:
            inside = [u for u in part if u in nbrs]
            outside = [u for u in part if u not in nbrs]
            refined.extend(p for p in (inside, outside) if p)
        parts = refined
    return order


def maximal_cliques(g: Graph) -> list[frozenset[int]]:
    """All maximal cliques of a chordal graph, sorted by member tuples."""
    if g.n == 0:
        raise EmptyGraph("graph has no vertices")
    order = lex_bfs(g)
    pos = {v: i for i, v in enumerate(order)}
    candidates = []
    for v in order:
        earlier = [u for u in g.adjacency[v] if pos[u] < pos[v]]
        for i, a in enumerate(earlier):
            for b in earlier[i + 1:]:
                if not g.has_edge(a, b):
                    raise NotChordal(f"not chordal, so not an interval graph: vertex {g.name(v)} has non-adjacent earlier neighbours {g.name(a)}, {g.name(b)}")
        candidates.append(frozenset(earlier) | {v})
    candidates = set(candidates)
    maximal = [c for c in candidates if not any(c < d for d in candidates)]
    return sorted(maximal, key=lambda c: sorted(c))


# ---------------------------------------------------------------- PQ-tree


def _overlap(a: frozenset, b: frozenset) -> bool:
    return bool(a & b) and not a <= b and not b <= a


def _order_atoms(component: list[frozenset]) -> list[frozenset]:
    """Order the Venn atoms of an overlap component so every member is consecutive."""
    todo = list(component)
    first = todo.pop(0)
    blocks: list[frozenset] = [first]
    placed = [first]
    while todo:
        s = next((x for x in todo if any(_overlap(x, p) for p in placed)), None)
        if s is None:
            raise InternalInvariantError("overlap component is not connected")
        todo.remove(s)
        placed.append(s)
        union = frozenset().union(*blocks)
        new = s - union
        touched = [i for i, b in enumerate(blocks) if b & s]
        lo, hi = touched[0], touched[-1]
        if touched != list(range(lo, hi + 1)):
            raise NotInterval("cliques cannot be ordered consecutively")
        for i in range(lo + 1, hi):
            if not blocks[i] <= s:
                raise NotInterval("cliques cannot be ordered consecutively")
        t = len(blocks)
        if lo == hi:
            b = blocks[lo]
            if not new:
                raise InternalInvariantError("set inside a single block cannot overlap a placed set")
            if lo == t - 1:
                blocks[lo:lo + 1] = [x for x in (b - s, b & s) if x]
                blocks.append(new)
            elif lo == 0:
                blocks[0:1] = [x for x in (b & s, b - s) if x]
                blocks.insert(0, new)
            else:
                raise NotInterval("cliques cannot be ordered consecutively")
            continue
        bl, bh = blocks[lo], blocks[hi]
        at_end = hi == t - 1 and bh <= s
        at_start = lo == 0 and bl <= s
        if new and not (at_end or at_start):
            raise NotInterval("cliques cannot be ordered consecutively")
        blocks[hi:hi + 1] = [x for x in (bh & s, bh - s) if x]
        blocks[lo:lo + 1] = [x for x in (bl - s, bl & s) if x]
        if new:
            if at_end:
                blocks.append(new)
            else:
                blocks.insert(0, new)
    for s in component:
        idx = [i for i, b in enumerate(blocks) if b & s]
        if idx != list(range(idx[0], idx[-1] + 1)) or any(not blocks[i] <= s for i in idx):
            raise NotInterval("cliques cannot be ordered consecutively")
    return blocks


def build_pq_tree(g: Graph) -> PQTree:
    cliques = maximal_cliques(g)
    k = len(cliques)
    member = {v: frozenset(i for i, c in enumerate(cliques) if v in c) for v in range(g.n)}
    sets = sorted({s for s in member.values() if 1 < len(s) < k}, key=lambda s: (len(s), sorted(s)))

    # overlap components
    comp_of = list(range(len(sets)))

    def find(x: int) -> int:
        while comp_of[x] != x:
            comp_of[x] = comp_of[comp_of[x]]
            x = comp_of[x]
        return x

    for i in range(len(sets)):
        for j in range(i + 1, len(sets)):
            if _overlap(sets[i], sets[j]):
                comp_of[find(i)] = find(j)
    comps: dict[int, list[frozenset]] = {}
    for i, s in enumerate(sets):
        comps.setdefault(find(i), []).append(s)
    q_unions: dict[frozenset, list[frozenset]] = {}
    unions: set[frozenset] = set()
    for members in comps.values():
        u = frozenset().union(*members)
        unions.add(u)
        if len(members) > 1:
            if u in q_unions:
                raise InternalInvariantError("two overlap components share a union")
            q_unions[u] = members

    nodes: list[PQNode] = []

    def new_node(kind: str, children: list[int], clique: int | None = None) -> int:
        nid = len(nodes)
        nodes.append(PQNode(nid, kind, list(children), None, clique))
        for c in children:
            nodes[c].parent = nid
        return nid

    def region_children(region: frozenset) -> list[int]:
        inside = [u for u in unions if u < region]
        maximal = [u for u in inside if not any(u < w for w in inside)]
        covered = frozenset().union(*maximal)
        parts = sorted(maximal + [frozenset([c]) for c in region - covered], key=min)
        return [make(p) for p in parts]

    def make(region: frozenset) -> int:
        if len(region) == 1:
            (c,) = region
            return new_node(LEAF, [], c)
        if region in q_unions:
            atoms = _order_atoms(q_unions[region])
            return new_node(QNODE, [make_region(a) for a in atoms])
        return new_node(PNODE, region_children(region))

    def make_region(region: frozenset) -> int:
        if len(region) == 1 or region in unions:
            return make(region)
        return new_node(PNODE, region_children(region))

    root = make(frozenset(range(k)))
    tree = PQTree(g, cliques, nodes, root)
    _assign_inner(tree, member)
    return tree


def _assign_inner(tree: PQTree, member: dict[int, frozenset[int]]) -> None:
    frontier = tree.frontier()
    pos = {c: i for i, c in enumerate(frontier)}
    leaf = {nd.clique: nd.id for nd in tree.nodes if nd.kind == LEAF}
    depth = tree.depth
    for v, s in member.items():
        ps = sorted(pos[c] for c in s)
        if ps[-1] - ps[0] != len(ps) - 1:
            raise NotInterval(f"cliques of vertex {tree.graph.name(v)} are not consecutive")
        nodes = [leaf[c] for c in s]
        # lowest common ancestor of the leaves holding v
        lca = nodes[0]
        for x in nodes[1:]:
            a, b = lca, x
            while depth[a] > depth[b]:
                a = tree.nodes[a].parent
            while depth[b] > depth[a]:
                b = tree.nodes[b].parent
            while a != b:
                a, b = tree.nodes[a].parent, tree.nodes[b].parent
            lca = a
        tree.inner_of[v] = lca
        nd = tree.nodes[lca]
        if nd.kind == QNODE:
            idx = [i for i, ch in enumerate(nd.children) if set(tree.leaves_under(ch)) & s]
            l, r = idx[0], idx[-1]
            for i in range(l, r + 1):
                if not set(tree.leaves_under(nd.children[i])) <= s:
                    raise NotInterval(f"vertex {tree.graph.name(v)} splits a child of a Q-node")
            tree.span_of[v] = (l, r)
            m = len(nd.children)
            tree.rank_of[v] = RankDescriptor(tuple(sorted(min(t, m - 1 - t) + 1 for t in range(l, r + 1))))
        else:
            tree.span_of[v] = None
            tree.rank_of[v] = RankDescriptor()


def rank(tree: PQTree, v: int) -> RankDescriptor:
    return tree.rank_of[v]


def palindromic_rank(child_count: int, lo: int, hi: int) -> RankDescriptor:
    """Rank of a vertex spanning children ``lo..hi`` (0-based) of a Q-node."""
    m = child_count
    return RankDescriptor(tuple(sorted(min(t, m - 1 - t) + 1 for t in range(lo, hi + 1))))


# ---------------------------------------------------------------- canonical codes


def _default_label(v: int) -> int:
    return 0


class _Coder:
    """Memoized bottom-up codes with optional vertex labels and placeholders."""

    def __init__(self, tree: PQTree, label: Callable[[int], object] = _default_label, placeholder: dict | None = None):
        self.tree = tree
        self.label = label
        self.placeholder = placeholder or {}
        self.memo: dict[int, tuple] = {}

    def oriented(self, node: int, reverse: bool) -> tuple:
        tree = self.tree
        ch = tree.children(node)
        m = len(ch)
        codes = [self.code(c) for c in ch]
        spans = []
        for v in tree.inner_vertices[node]:
            l, r = tree.span_of[v]
            if reverse:
                l, r = m - 1 - r, m - 1 - l
            spans.append((l, r, self.label(v)))
        if reverse:
            codes = codes[::-1]
        return (tuple(codes), tuple(sorted(spans)))

    def is_reversed(self, node: int) -> bool:
        """True when the reversed child order is the canonical orientation."""
        return self.oriented(node, True) < self.oriented(node, False)

    def symmetric(self, node: int) -> bool:
        return self.oriented(node, True) == self.oriented(node, False)

    def code(self, node: int) -> tuple:
        if node in self.placeholder:
            return self.placeholder[node]
        if node in self.memo:
            return self.memo[node]
        tree = self.tree
        kind = tree.kind(node)
        labels = tuple(sorted(self.label(v) for v in tree.inner_vertices[node]))
        if kind == LEAF:
            out = (LEAF, labels)
        elif kind == PNODE:
            out = (PNODE, labels, tuple(sorted(self.code(c) for c in tree.children(node))))
        else:
            out = (QNODE, min(self.oriented(node, False), self.oriented(node, True)))
        self.memo[node] = out
        return out


def canonical_code(tree: PQTree, root: int | None = None, label: Callable[[int], object] | None = None) -> tuple:
    """Code of the subtree at ``root``; equal codes mean isomorphic subtrees."""
    coder = _Coder(tree, label or _default_label)
    return coder.code(tree.root if root is None else root)


def graph_code(g: Graph) -> tuple:
    return canonical_code(build_pq_tree(g))


# ---------------------------------------------------------------- automorphisms


def _match(coder: _Coder, a: int, b: int, out: dict[int, int]) -> None:
    """Extend ``out`` by an isomorphism from subtree ``a`` onto subtree ``b``."""
    tree = coder.tree
    label = coder.label
    kind = tree.kind(a)
    if kind != tree.kind(b) or coder.code(a) != coder.code(b):
        raise InternalInvariantError("matching subtrees with different codes")
    if kind == QNODE:
        ra, rb = coder.is_reversed(a), coder.is_reversed(b)
        ca, cb = list(tree.children(a)), list(tree.children(b))
        m = len(ca)
        if ra:
            ca = ca[::-1]
        if rb:
            cb = cb[::-1]
        for x, y in zip(ca, cb):
            _match(coder, x, y, out)

        def key(node, rev):
            def k(v):
                l, r = tree.span_of[v]
                if rev:
                    l, r = m - 1 - r, m - 1 - l
                return (l, r, label(v), v)
            return k

        ia = sorted(tree.inner_vertices[a], key=key(a, ra))
        ib = sorted(tree.inner_vertices[b], key=key(b, rb))
    else:
        if kind == PNODE:
            ca = sorted(tree.children(a), key=coder.code)
            cb = sorted(tree.children(b), key=coder.code)
            for x, y in zip(ca, cb):
                _match(coder, x, y, out)
        ia = sorted(tree.inner_vertices[a], key=lambda v: (label(v), v))
        ib = sorted(tree.inner_vertices[b], key=lambda v: (label(v), v))
    for u, v in zip(ia, ib):
        out[u] = v


def tree_automorphism_generators(tree: PQTree, label: Callable[[int], object] | None = None) -> list[Permutation]:
    """Generators of the label-preserving automorphisms of the tree, as vertex permutations."""
    coder = _Coder(tree, label or _default_label)
    lab = coder.label
    n = tree.graph.n
    gens: list[Permutation] = []

    # (i) twins: same inner node, same exact span, same label
    classes: dict[tuple, list[int]] = {}
    for v in range(n):
        classes.setdefault((tree.inner_of[v], tree.span_of[v], lab(v)), []).append(v)
    for members in classes.values():
        for u, w in zip(members, members[1:]):
            gens.append(Permutation.from_cycles(n, [(u, w)]))

    for node in tree.postorder():
        kind = tree.kind(node)
        if kind == PNODE:
            # (ii) swap adjacent equal-code children
            ch = sorted(tree.children(node), key=coder.code)
            for x, y in zip(ch, ch[1:]):
                if coder.code(x) == coder.code(y):
                    fwd: dict[int, int] = {}
                    _match(coder, x, y, fwd)
                    mapping = dict(fwd)
                    mapping.update({w: u for u, w in fwd.items()})
                    gens.append(Permutation.from_mapping(n, mapping))
        elif kind == QNODE and coder.symmetric(node):
            # (iii) reversal of a symmetric Q-node
            ch = tree.children(node)
            m = len(ch)
            mapping: dict[int, int] = {}
            for i in range(m // 2):
                fwd = {}
                _match(coder, ch[i], ch[m - 1 - i], fwd)
                mapping.update(fwd)
                mapping.update({w: u for u, w in fwd.items()})

            def fkey(v):
                l, r = tree.span_of[v]
                return (l, r, lab(v), v)

            def rkey(v):
                l, r = tree.span_of[v]
                return (m - 1 - r, m - 1 - l, lab(v), v)

            inner = tree.inner_vertices[node]
            for u, w in zip(sorted(inner, key=fkey), sorted(inner, key=rkey)):
                mapping[u] = w
            p = Permutation.from_mapping(n, mapping)
            if not p.is_identity():
                gens.append(p)
    for p in gens:
        if not tree.graph.is_automorphism(p):
            raise InternalInvariantError(f"generator {p} is not a graph automorphism")
    return [p for p in gens if not p.is_identity()]


def interval_automorphism_group(g: Graph) -> PermGroup:
    tree = build_pq_tree(g)
    return PermGroup(g.n, tree_automorphism_generators(tree))


def check_tree(tree: PQTree) -> None:
    """Assert the structural invariants of a PQ-tree; raises InternalInvariantError."""
    frontier = tree.frontier()
    if sorted(frontier) != list(range(len(tree.cliques))):
        raise InternalInvariantError("leaves do not biject with cliques")
    pos = {c: i for i, c in enumerate(frontier)}
    for nd in tree.nodes:
        if nd.kind == PNODE and len(nd.children) < 2:
            raise InternalInvariantError("P-node with fewer than two children")
        if nd.kind == QNODE and len(nd.children) < 3:
            raise InternalInvariantError("Q-node with fewer than three children")
    for v in range(tree.graph.n):
        ps = sorted(pos[i] for i, c in enumerate(tree.cliques) if v in c)
        if ps[-1] - ps[0] != len(ps) - 1:
            raise InternalInvariantError(f"vertex {v} violates consecutive ones")
        p = tree.inner_of[v]
        for ch in tree.children(p):
            under = tree.vertices_under(ch)
            if v in under:
                stack = [ch]
                while stack:
                    x = stack.pop()
                    if v not in tree.vertices_under(x):
                        raise InternalInvariantError(f"vertex {v} misses a descendant of a child it belongs to")
                    stack.extend(tree.children(x))
