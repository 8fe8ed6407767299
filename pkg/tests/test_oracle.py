from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from automset import oracle
from automset.errors import BudgetExceeded
from automset.intervalpq import Graph, maximal_cliques
from automset.markedreduction import MarkedInstance
from automset.permgroup import Permutation
from automset.setfamily import ColoredSetFamily

from conftest import venn4_sets


def test_brute_autom_set_examples():
    assert oracle.brute_autom_set(ColoredSetFamily.build(3, [([0, 1], 0)])).order() == 1
    path = ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 0), ([1, 2], 0)])
    assert oracle.brute_autom_set(path).order() == 2
    pairs = ColoredSetFamily.build(6, [([0, 1], 0), ([2, 3], 0), ([4, 5], 0)])
    assert oracle.brute_autom_set(pairs).order() == 6


def test_brute_graph_examples():
    assert oracle.brute_graph_autom(Graph.from_cliques([[0, 1, 2]])).order() == 6
    assert oracle.brute_graph_autom(Graph.from_edges(3, [(0, 1), (1, 2)])).order() == 2
    assert oracle.brute_graph_autom(Graph.from_edges(1, [])).order() == 1


def test_brute_marked_examples():
    k3 = Graph.from_cliques([[0, 1, 2]])
    assert oracle.brute_autom_marked(MarkedInstance.build(k3, [([0], 0), ([1], 0), ([2], 0)])).order() == 6
    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert oracle.brute_autom_marked(MarkedInstance.build(p3, [([0], 0), ([2], 0)])).order() == 2
    assert oracle.brute_autom_marked(MarkedInstance.build(p3, [([0], 0), ([2], 1)])).order() == 1


def test_multiplicity_lifts_to_copy_permutations():
    fam = ColoredSetFamily.build(2, [([0, 1], 0, 3)])
    assert oracle.brute_autom_set(fam).order() == 6


def test_max_antichain_examples():
    assert oracle.max_antichain([[0], [0, 1], [0, 1, 2]]) == 1
    assert oracle.max_antichain([[0], [1], [2], [3]]) == 4
    assert oracle.max_antichain(list(venn4_sets().values())) == 4


def test_budget_is_enforced():
    big = ColoredSetFamily.build(9, [([0], 0)])
    with pytest.raises(BudgetExceeded):
        oracle.brute_autom_set(big)
    small = oracle.OracleBudget(max_ground=8, max_permutations=10)
    with pytest.raises(BudgetExceeded):
        oracle.brute_autom_set(ColoredSetFamily.build(5, [([0, 1, 2, 3, 4], 0)]), small)


def test_generators_are_deterministic():
    assert oracle.gen_set_family(42) == oracle.gen_set_family(42)
    assert oracle.gen_interval_instance(42, 7, 4, 2) == oracle.gen_interval_instance(42, 7, 4, 2)


def test_single_vertex_instance():
    m = oracle.gen_interval_instance(3, 1, 2, 1)
    assert m.graph.n == 1
    assert all(e.members == (0,) for e in m.entries)


def test_generated_instances_are_valid():
    rng = random.Random(0)
    for _ in range(100):
        n = rng.randint(1, 8)
        m = oracle.gen_interval_instance(rng.randrange(2**32), n, rng.randint(1, 6), rng.randint(1, 3))
        m.check_cliques()
        cliques = maximal_cliques(m.graph)
        assert all(any(set(e.members) <= c for c in cliques) for e in m.entries)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_oracle_set_groups_are_closed(seed):
    assert oracle.brute_autom_set(oracle.gen_set_family(seed, max_ground=6)).is_closed()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7))
def test_oracle_marked_groups_are_closed(seed, n):
    assert oracle.brute_autom_marked(oracle.gen_interval_instance(seed, n, 4, 2)).is_closed()


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.randoms(use_true_random=False))
def test_oracle_invariant_under_relabeling(seed, rnd):
    fam = oracle.gen_set_family(seed, max_ground=6)
    images = list(range(fam.ground_size))
    rnd.shuffle(images)
    moved = oracle.relabel_family(fam, Permutation(images))
    assert oracle.brute_autom_set(fam).order() == oracle.brute_autom_set(moved).order()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 7), st.randoms(use_true_random=False))
def test_marked_oracle_invariant_under_relabeling(seed, n, rnd):
    m = oracle.gen_interval_instance(seed, n, 4, 2)
    images = list(range(n))
    rnd.shuffle(images)
    m2 = m.relabel(Permutation(images))
    assert oracle.brute_autom_marked(m).order() == oracle.brute_autom_marked(m2).order()


def test_group_equal_detects_difference():
    from automset.permgroup import PermGroup

    fam = ColoredSetFamily.build(4, [([0, 1], 0), ([2, 3], 0)])
    brute = oracle.brute_autom_set(fam)
    assert oracle.group_equal(PermGroup(2, [Permutation([1, 0])]), brute)
    assert not oracle.group_equal(PermGroup(2), brute)
