"""Permutations and permutation groups with a deterministic Schreier-Sims core.

Permutations act on ``{0, ..., n-1}`` and are stored as image tuples.  The
product ``p * q`` applies ``p`` first and then ``q``, so ``(p * q)(i) ==
q(p(i))``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from math import factorial, prod
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    DomainMismatch,
    IndexBoundExceeded,
    InvalidPartition,
    NonInvariantSubdomain,
)


class Permutation:
    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images: tuple) -> Permutation:
        p = cls.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, n: int, cycles: Iterable[Sequence[int]]) -> Permutation:
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen or not 0 <= a < n:
                    raise ValueError(f"bad cycle {cyc} on {n} points")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls._raw(tuple(images))

    @classmethod
    def from_mapping(cls, n: int, mapping: dict) -> Permutation:
        images = list(range(n))
        for a, b in mapping.items():
            images[a] = b
        return cls(images)

    @property
    def domain_size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        if len(other.images) != len(self.images):
            raise DomainMismatch(
                f"cannot compose permutations on {len(self.images)} and {len(other.images)} points"
            )
        o = other.images
        return Permutation._raw(tuple([o[i] for i in self.images]))

    def inverse(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        result = Permutation.identity(len(self.images))
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def first_moved(self) -> int | None:
        for i, j in enumerate(self.images):
            if i != j:
                return i
        return None

    def parity(self) -> int:
        """0 for even permutations, 1 for odd ones."""
        return sum(len(c) - 1 for c in self.cycles()) % 2

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                seen.add(j)
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_notation(self, labels: Sequence | None = None) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        name = (lambda i: str(labels[i])) if labels is not None else str
        return "".join("(" + " ".join(name(i) for i in c) + ")" for c in cyc)

    def restrict(self, subdomain: Sequence[int]) -> Permutation:
        """Restriction to an invariant subdomain, re-indexed by position."""
        pos = {x: k for k, x in enumerate(subdomain)}
        try:
            return Permutation._raw(tuple(pos[self.images[x]] for x in subdomain))
        except KeyError:
            raise NonInvariantSubdomain(f"{self} does not preserve {list(subdomain)}") from None

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Permutation({list(self.images)})"

    def __str__(self) -> str:
        return self.cycle_notation()


@dataclass
class _Chain:
    base: list[int]
    gens: list[list[Permutation]]
    trans: list[dict[int, Permutation]]


def _orbit_transversal(n: int, point: int, gens: Sequence[Permutation]) -> dict[int, Permutation]:
    trans = {point: Permutation.identity(n)}
    queue = [point]
    for beta in queue:
        u = trans[beta]
        for x in gens:
            gamma = x.images[beta]
            if gamma not in trans:
                trans[gamma] = u * x
                queue.append(gamma)
    return trans


def _strip(chain: _Chain, h: Permutation, start: int = 0) -> tuple[Permutation, int]:
    for level in range(start, len(chain.base)):
        beta = h.images[chain.base[level]]
        u = chain.trans[level].get(beta)
        if u is None:
            return h, level
        if beta != chain.base[level]:
            h = h * u.inverse()
    return h, len(chain.base)


def _schreier_sims(n: int, gens: Sequence[Permutation], known_order: int | None = None) -> _Chain:
    # Holt's deterministic SCHREIERSIMS; base points are first moved points.
    strong = list(dict.fromkeys(g for g in gens if not g.is_identity()))
    base: list[int] = []
    for s in strong:
        if all(s.images[b] == b for b in base):
            base.append(s.first_moved())
    levels: list[list[Permutation]] = [[] for _ in base]
    for s in strong:
        for i, b in enumerate(base):
            levels[i].append(s)
            if s.images[b] != b:
                break
    chain = _Chain(base, levels, [_orbit_transversal(n, base[i], levels[i]) for i in range(len(base))])

    def complete() -> bool:
        return known_order is not None and prod(len(t) for t in chain.trans) == known_order

    i = len(base) - 1
    while i >= 0 and not complete():
        added = False
        for beta, u_beta in list(chain.trans[i].items()):
            for x in list(chain.gens[i]):
                target = x.images[beta]
                h = u_beta * x * chain.trans[i][target].inverse()
                if h.is_identity():
                    continue
                g, j = _strip(chain, h, i + 1)
                if j == len(chain.base):
                    if g.is_identity():
                        continue
                    chain.base.append(g.first_moved())
                    chain.gens.append([])
                    chain.trans.append({})
                for level in range(i + 1, j + 1):
                    chain.gens[level].append(g)
                    chain.trans[level] = _orbit_transversal(n, chain.base[level], chain.gens[level])
                i = j
                added = True
                break
            if added:
                break
        if not added:
            i -= 1
    return chain


class PermGroup:
    """A permutation group given by generators, with a lazily built BSGS.

    The base/transversal structure is built once under a lock, so concurrent
    readers always observe the same chain.
    """

    def __init__(self, domain_size: int, generators: Iterable[Permutation] = (), *, known_order: int | None = None):
        gens = tuple(generators)
        for g in gens:
            if g.domain_size != domain_size:
                raise DomainMismatch(f"generator on {g.domain_size} points in a group on {domain_size}")
        self.domain_size = domain_size
        self.generators = gens
        self._known_order = known_order
        self._chain: _Chain | None = None
        self._lock = threading.Lock()

    def _bsgs(self) -> _Chain:
        if self._chain is None:
            with self._lock:
                if self._chain is None:
                    self._chain = _schreier_sims(self.domain_size, self.generators, self._known_order)
        return self._chain

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(self._bsgs().base)

    def transversal_sizes(self) -> list[int]:
        return [len(t) for t in self._bsgs().trans]

    def strong_generators(self) -> list[Permutation]:
        chain = self._bsgs()
        out = dict.fromkeys(g for level in chain.gens for g in level)
        return list(out)

    def order(self) -> int:
        return prod(len(t) for t in self._bsgs().trans)

    def contains(self, p: Permutation) -> bool:
        if p.domain_size != self.domain_size:
            raise DomainMismatch(f"permutation on {p.domain_size} points, group on {self.domain_size}")
        chain = self._bsgs()
        h, level = _strip(chain, p)
        return level == len(chain.base) and h.is_identity()

    __contains__ = contains

    def is_trivial(self) -> bool:
        return self.order() == 1

    def identity(self) -> Permutation:
        return Permutation.identity(self.domain_size)

    def elements(self) -> Iterator[Permutation]:
        """Enumerate every element; only sensible for small groups."""
        chain = self._bsgs()
        levels = [list(t.values()) for t in chain.trans]

        def rec(k: int, acc: Permutation):
            if k < 0:
                yield acc
                return
            for u in levels[k]:
                yield from rec(k - 1, acc * u)

        yield from rec(len(levels) - 1, self.identity())

    def __repr__(self) -> str:
        return f"PermGroup(domain_size={self.domain_size}, generators={len(self.generators)})"


def schreier_sims(generators: Sequence[Permutation], domain_size: int | None = None) -> PermGroup:
    """Build a group with its base and transversals computed eagerly."""
    if domain_size is None:
        if not generators:
            raise ValueError("domain_size is required for an empty generating set")
        domain_size = generators[0].domain_size
    group = PermGroup(domain_size, generators)
    group._bsgs()
    return group


def membership(group: PermGroup, p: Permutation) -> bool:
    return group.contains(p)


def order(group: PermGroup) -> int:
    return group.order()


def symmetric_product(partition: Sequence[Sequence[int]], domain_size: int) -> PermGroup:
    """Direct product of the full symmetric groups on disjoint parts."""
    seen: set[int] = set()
    gens = []
    for part in partition:
        for x in part:
            if x in seen or not 0 <= x < domain_size:
                raise InvalidPartition(f"point {x} repeated or out of range")
            seen.add(x)
        if len(part) >= 2:
            gens.append(Permutation.from_cycles(domain_size, [part[:2]]))
            if len(part) > 2:
                gens.append(Permutation.from_cycles(domain_size, [part]))
    known = prod(factorial(len(part)) for part in partition)
    return PermGroup(domain_size, gens, known_order=known)


def subgroup_by_membership(
    group: PermGroup,
    predicate: Callable[[Permutation], bool],
    index_bound: int,
) -> PermGroup:
    """Generators of ``{g in group : predicate(g)}`` by right-coset search.

    ``predicate`` must describe a subgroup of index at most ``index_bound``;
    otherwise :class:`IndexBoundExceeded` is raised.
    """
    n = group.domain_size
    gens = group.generators
    reps = [Permutation.identity(n)]
    reps_inv = [reps[0]]
    schreier: dict[Permutation, None] = {}
    i = 0
    while i < len(reps):
        r = reps[i]
        for g in gens:
            x = r * g
            for r_inv in reps_inv:
                y = x * r_inv
                if predicate(y):
                    if not y.is_identity():
                        schreier[y] = None
                    break
            else:
                reps.append(x)
                reps_inv.append(x.inverse())
                if len(reps) > index_bound:
                    raise IndexBoundExceeded(
                        f"more than {index_bound} cosets; predicate is not a subgroup of that index"
                    )
        i += 1
    index = len(reps)
    sub = PermGroup(n, list(schreier), known_order=group.order() // index)
    out = PermGroup(n, sub.strong_generators(), known_order=group.order() // index)
    out._chain = sub._bsgs()
    return out


def restrict(group: PermGroup, subdomain: Sequence[int]) -> PermGroup:
    """Image of ``group`` acting on an invariant subdomain (re-indexed)."""
    sub = list(subdomain)
    if len(set(sub)) != len(sub):
        raise NonInvariantSubdomain("subdomain has repeated points")
    gens = [g.restrict(sub) for g in group.generators]
    return PermGroup(len(sub), [g for g in gens if not g.is_identity()])


def closure(generators: Sequence[Permutation], domain_size: int) -> set[Permutation]:
    """Brute-force closure; a test helper for tiny groups."""
    ident = Permutation.identity(domain_size)
    elements = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in generators:
                b = a * g
                if b not in elements:
                    elements.add(b)
                    nxt.append(b)
        frontier = nxt
    return elements
