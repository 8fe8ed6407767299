from __future__ import annotations

import itertools

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from automset import oracle
from automset.errors import InvalidFamily, NonStabilizedSubfamily
from automset.permgroup import Permutation, PermGroup, closure, symmetric_product
from automset.setfamily import (
    AllGood,
    ColoredSetFamily,
    Refined,
    SimpleFamily,
    autom_set,
    cardinality_partition,
    expand_solution,
    max_antichain,
    simplify,
    tower_step,
    venn_diagram,
    venn_good,
)

from conftest import VENN4_CELLS, venn4_family, venn4_sets


def simple(n, sets, colors=None) -> SimpleFamily:
    fam = ColoredSetFamily.build(n, [(s, colors[i] if colors else 0) for i, s in enumerate(sets)])
    return simplify(fam)


def rho_from(fam: SimpleFamily, mapping: dict) -> Permutation:
    idx = {s: i for i, s in enumerate(fam.sets)}
    images = list(range(len(fam)))
    for a, b in mapping.items():
        images[idx[tuple(a)]] = idx[tuple(b)]
    return Permutation(images)


@st.composite
def simple_families(draw, max_n=6, max_sets=6):
    n = draw(st.integers(1, max_n))
    raw = draw(st.lists(st.sets(st.integers(0, n - 1), min_size=1), min_size=1, max_size=max_sets))
    sets = sorted({tuple(sorted(s)) for s in raw})
    return simple(n, sets)


# ---------------------------------------------------------------- data types


def test_family_validation():
    with pytest.raises(InvalidFamily):
        ColoredSetFamily.build(3, [([], 0)])
    with pytest.raises(InvalidFamily):
        ColoredSetFamily.build(3, [([0, 5], 0)])


def test_build_merges_repeats_into_multiplicity():
    fam = ColoredSetFamily.build(3, [([0, 1], 0), ([1, 0], 0)])
    assert [e.multiplicity for e in fam.entries] == [2]


# ---------------------------------------------------------------- simplify


def test_simplify_already_simple():
    s = simplify(ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 0)]))
    assert s.colors == (0, 0)
    assert s.vectors == ((1,), (1,))


def test_simplify_multiplicity_refines_colors():
    s = simplify(ColoredSetFamily.build(4, [([0, 1], 0, 2), ([2, 3], 0, 1)]))
    by_set = dict(zip(s.sets, s.vectors))
    assert by_set == {(0, 1): (2,), (2, 3): (1,)}
    assert len(set(s.colors)) == 2


def test_simplify_set_in_two_colors():
    s = simplify(ColoredSetFamily.build(2, [([0, 1], 0), ([0, 1], 1)]))
    assert s.sets == ((0, 1),)
    assert s.vectors == ((1, 1),)


# ---------------------------------------------------------------- expand_solution


def test_expand_all_multiplicities_one():
    fam = ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 0)])
    s = simplify(fam)
    g = PermGroup(2, [Permutation([1, 0])])
    assert expand_solution(g, s, fam).order() == 2


def test_expand_copies_of_one_set():
    fam = ColoredSetFamily.build(2, [([0, 1], 0, 3)])
    s = simplify(fam)
    assert expand_solution(PermGroup(1), s, fam).order() == 6


def test_expand_swap_with_double_copies():
    fam = ColoredSetFamily.build(4, [([0, 1], 0, 2), ([2, 3], 0, 2)])
    s = simplify(fam)
    lifted = expand_solution(PermGroup(2, [Permutation([1, 0])]), s, fam)
    assert lifted.order() == 8
    assert len(closure(lifted.generators, 4)) == 8


# ---------------------------------------------------------------- Venn diagrams


def test_venn_single_set():
    s = simple(5, [(0, 1, 2, 3, 4)])
    assert venn_diagram(s, [0]).cells == {(0,): 5}


def test_venn_two_overlapping_pairs():
    s = simple(3, [(0, 1), (1, 2)])
    assert venn_diagram(s, [0, 1]).cells == {(0,): 1, (1,): 1, (0, 1): 1}


def test_venn_venn4_cells():
    fam = venn4_family()
    s = simplify(fam)
    sets = venn4_sets()
    name = {s.sets.index(tuple(sets[k])): k for k in "ABCD"}
    cells = venn_diagram(s, range(4)).cells
    named = {"".join(sorted(name[i] for i in key)): v for key, v in cells.items()}
    expected = {"".join(sorted(k)): v for k, v in VENN4_CELLS.items()}
    assert named == expected
    assert venn_diagram(s, range(4)).total() == 20


def test_venn_good_identity_and_venn4():
    s = simplify(venn4_family())
    sets = venn4_sets()
    assert venn_good(s, range(4), Permutation.identity(4))
    swap_ad = rho_from(s, {tuple(sets["A"]): tuple(sets["D"]), tuple(sets["D"]): tuple(sets["A"])})
    swap_bc = rho_from(s, {tuple(sets["B"]): tuple(sets["C"]), tuple(sets["C"]): tuple(sets["B"])})
    assert venn_good(s, range(4), swap_ad)
    assert not venn_good(s, range(4), swap_bc)


def test_venn_good_requires_stabilized_subfamily():
    s = simple(4, [(0, 1), (2, 3)])
    with pytest.raises(NonStabilizedSubfamily):
        venn_good(s, [0], Permutation([1, 0]))


# ---------------------------------------------------------------- tower


def test_tower_step_all_good_for_singleton_parts():
    s = simple(4, [(0,), (1, 2), (0, 1, 3)])
    W = cardinality_partition(s)
    assert isinstance(tower_step(s, W, symmetric_product(W.parts, len(s))), AllGood)


def test_tower_step_refines_path_family():
    s = simple(4, [(0, 1), (2, 3), (1, 2)])
    W = cardinality_partition(s)
    assert W.parts == ((0, 1, 2),)
    res = tower_step(s, W, symmetric_product(W.parts, 3))
    assert isinstance(res, Refined)
    assert res.part_indices == (0,)
    assert res.gamma_next.order() == 2
    swap = rho_from(s, {(0, 1): (2, 3), (2, 3): (0, 1)})
    assert swap in res.gamma_next
    assert isinstance(tower_step(s, W, res.gamma_next), AllGood)


def test_autom_set_examples():
    assert autom_set(ColoredSetFamily.build(3, [([0, 1], 0)]))[0].order() == 1
    assert autom_set(ColoredSetFamily.build(6, [([0, 1], 0), ([2, 3], 0), ([4, 5], 0)]))[0].order() == 6
    assert autom_set(ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 0), ([1, 2], 0)]))[0].order() == 2
    assert autom_set(ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 1)]))[0].order() == 1


def test_autom_set_venn4_keeps_ad_swap():
    fam = venn4_family()
    group, _ = autom_set(fam)
    sets = venn4_sets()
    dom = fam.domain()
    pos = {k: dom.index((0, tuple(sets[k]), 0)) for k in "ABCD"}
    ad = Permutation.from_cycles(4, [(pos["A"], pos["D"])])
    bc = Permutation.from_cycles(4, [(pos["B"], pos["C"])])
    assert ad in group and bc not in group


def test_ground_colors_restrict_realizations():
    # {0,1} and {2,3} may swap unless the ground colors tell them apart
    fam = ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 0)], ground_colors=[0, 0, 1, 1])
    assert autom_set(fam)[0].order() == 1
    fam = ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 0)], ground_colors=[0, 1, 0, 1])
    assert autom_set(fam)[0].order() == 2


def test_max_antichain_simple_cases():
    assert max_antichain([(0,), (0, 1), (0, 1, 2)]) == 1
    assert max_antichain([(0,), (1,), (2,)]) == 3
    assert max_antichain([]) == 0


# ---------------------------------------------------------------- properties


def stabilizing_perms(fam: SimpleFamily, limit=40):
    W = cardinality_partition(fam)
    per_part = [list(itertools.permutations(p)) for p in W.parts]
    out = []
    for choice in itertools.product(*per_part):
        images = list(range(len(fam)))
        for part, img in zip(W.parts, choice):
            for a, b in zip(part, img):
                images[a] = b
        out.append(Permutation(images))
        if len(out) >= limit:
            break
    return out


@settings(max_examples=80, deadline=None)
@given(simple_families())
def test_venn_good_iff_realizable(fam):
    for rho in stabilizing_perms(fam, 12):
        realizable = oracle.brute_realizable(fam.ground_size, fam.sets, rho.images)
        assert venn_good(fam, range(len(fam)), rho) == realizable


@settings(max_examples=60, deadline=None)
@given(simple_families(), st.data())
def test_venn_good_is_monotone(fam, data):
    for rho in stabilizing_perms(fam, 12):
        if not venn_good(fam, range(len(fam)), rho):
            continue
        # any union of rho-orbits is stabilized
        seen, orbit_list = set(), []
        for i in range(len(fam)):
            if i in seen:
                continue
            orb, j = [], i
            while j not in orb:
                orb.append(j)
                j = rho(j)
            seen.update(orb)
            orbit_list.append(orb)
        pick = data.draw(st.lists(st.booleans(), min_size=len(orbit_list), max_size=len(orbit_list)))
        sub = [j for orb, keep in zip(orbit_list, pick) if keep for j in orb]
        if sub:
            assert venn_good(fam, sub, rho)


@settings(max_examples=40, deadline=None)
@given(simple_families(max_sets=5))
def test_venn_good_members_form_a_group(fam):
    perms = stabilizing_perms(fam, 200)
    good = {p for p in perms if venn_good(fam, range(len(fam)), p)}
    assume(len(perms) < 200)
    for a in good:
        assert a.inverse() in good
        for b in good:
            assert a * b in good


def cell(sets, inside, outside) -> int:
    common = set.intersection(*(set(s) for s in inside))
    for s in outside:
        common -= set(s)
    return len(common)


def has_witness(fam: SimpleFamily, sub, rho) -> bool:
    # the witness subfamily need not be stabilized by rho
    for k in range(1, len(sub) + 1):
        for inner in itertools.combinations(sub, k):
            rest = [j for j in sub if j not in inner]
            lhs = cell(fam.sets, [fam.sets[j] for j in inner], [fam.sets[j] for j in rest])
            rhs = cell(fam.sets, [fam.sets[rho(j)] for j in inner], [fam.sets[rho(j)] for j in rest])
            if lhs != rhs:
                return True
    return False


@settings(max_examples=60, deadline=None)
@given(simple_families())
def test_witness_subfamily_is_small(fam):
    a = max(fam.max_antichain, 2)
    full = range(len(fam))
    for rho in stabilizing_perms(fam, 12):
        if venn_good(fam, full, rho):
            continue
        assert any(
            has_witness(fam, sub, rho)
            for size in range(1, min(a, len(fam)) + 1)
            for sub in itertools.combinations(full, size)
        )


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6))
def test_autom_set_matches_oracle(seed):
    fam = oracle.gen_set_family(seed)
    group, trace = autom_set(fam)
    assert oracle.group_equal(group, oracle.brute_autom_set(fam))
    assert trace.within_bounds()
    orders = [trace.initial_order] + [s.order for s in trace.steps]
    assert all(x > y for x, y in zip(orders, orders[1:]))


@settings(max_examples=60, deadline=None)
@given(simple_families(max_n=7, max_sets=8))
def test_max_antichain_matches_oracle(fam):
    assert max_antichain(fam.sets) == oracle.max_antichain(fam.sets)
