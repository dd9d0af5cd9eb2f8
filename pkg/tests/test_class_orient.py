import time

import pytest
from hypothesis import given, settings, strategies as st

from netorient.class_orient import (Budget, BudgetExceeded, c_orientation, chain_reduce, is_tree_based_undirected,
                                    rootable_edges, rootable_edges_exhaustive, rootable_edges_fpt)
from netorient.classes import NAMED_CLASSES, NetworkClass, class_membership
from netorient.fixtures import load_fixture
from netorient.generate import random_undirected
from netorient.network import UndirectedNetwork, edge, underlying_network
from netorient.structure import GeneratorUndefined, blob_decomposition
from netorient.suite import multi_blob_network, single_blob_network

from oracles import cubic_with_leaves, raw_rootable, spanning_tree_tree_based

STACK_FREE = NetworkClass("stack_free")
TREE_CHILD = NetworkClass("tree_child")
TREE_BASED = NetworkClass("tree_based")
ANY = NetworkClass("any")


def fix(name):
    return load_fixture(name).network


def tree():
    return UndirectedNetwork.from_edges([("x1", "p"), ("x2", "p"), ("p", "q"), ("q", "x3"), ("q", "r"),
                                         ("r", "x4"), ("r", "x5")])


def theta(long_side=7):
    """Two branch vertices u, v joined by three paths; one carries
    ``long_side`` leaves, the other two one leaf each."""
    edges = [("u", "q"), ("q", "v"), ("q", "y"), ("u", "s"), ("s", "v"), ("s", "z")]
    prev = "u"
    for i in range(1, long_side + 1):
        edges += [(prev, f"p{i}"), (f"p{i}", f"c{i}")]
        prev = f"p{i}"
    edges.append((prev, "v"))
    return UndirectedNetwork.from_edges(edges)


def k4_with_leaf():
    # K4 on a, b, c, d with a-b subdivided by s, which carries the only leaf
    return UndirectedNetwork.from_edges([("a", "s"), ("s", "b"), ("s", "x"), ("a", "c"), ("a", "d"), ("b", "c"),
                                         ("b", "d"), ("c", "d")])


def test_fix_a_stack_free_but_not_tree_child():
    net = fix("fix_a")
    found = rootable_edges_exhaustive(net, STACK_FREE)
    assert len(found) > 0
    assert len(rootable_edges_exhaustive(net, TREE_CHILD)) == 0
    for e in found.edges():
        d = found.entries[e]
        assert class_membership(d, STACK_FREE)
        assert d.root_edge == e


def test_fix_b_orientable_but_not_stack_free():
    net = fix("fix_b")
    assert len(rootable_edges_exhaustive(net, ANY)) > 0
    assert len(rootable_edges_exhaustive(net, STACK_FREE)) == 0


def test_fix_c_any_but_not_tree_based():
    net = fix("fix_c")
    result = c_orientation(net, ANY)
    assert result.found
    assert underlying_network(result.network) == net
    no = c_orientation(net, TREE_BASED)
    assert not no.found and no.reason


def test_fix_a_fpt_matches_exhaustive():
    net = fix("fix_a")
    fpt = rootable_edges_fpt(net, STACK_FREE)
    assert fpt.edges() == rootable_edges_exhaustive(net, STACK_FREE).edges() != []


def test_tree_input_orients():
    result = c_orientation(tree(), ANY)
    assert result.found and result.root_edge in tree().edges
    assert underlying_network(result.network) == tree()


def test_chain_reduce_keeps_fix_a():
    red = chain_reduce(fix("fix_a"), 3)
    assert red.network == fix("fix_a") and not red.long_sides()


def test_chain_reduce_theta():
    net = theta(7)
    red = chain_reduce(net, 3)
    (long,) = red.long_sides()
    assert len(long.side.chain) == 7 and long.kept == 3
    assert len(red.network.leaves) == 5
    assert red.network.reticulation_number == 2


def test_chain_reduce_needs_generator():
    with pytest.raises(GeneratorUndefined):
        triangle = UndirectedNetwork.from_edges([("a", "b"), ("b", "c"), ("a", "c"), ("a", "x"), ("b", "y"),
                                                 ("c", "z")])
        chain_reduce(triangle, 3)


@pytest.mark.parametrize("tag", NAMED_CLASSES)
def test_theta_fpt_matches_exhaustive(tag):
    net, cls = theta(7), NetworkClass(tag)
    fpt = rootable_edges_fpt(net, cls)
    assert fpt.edges() == rootable_edges_exhaustive(net, cls).edges()
    assert fpt.fallbacks == 0
    for e in fpt.edges():
        assert class_membership(fpt.entries[e], cls)


def test_tree_based_undirected_k4_with_leaf():
    net = k4_with_leaf()
    # the single cut edge is the pendant edge, and rooting there leaves no leaf below the blob
    assert not is_tree_based_undirected(net)
    assert not spanning_tree_tree_based(net)
    # it is still orientable as a tree-based network, e.g. rooted next to the pendant edge
    assert c_orientation(net, TREE_BASED).found
    roots = rootable_edges(net, TREE_BASED)
    assert edge("a", "s") in roots and edge("s", "b") in roots
    assert edge("s", "x") not in roots


def test_tree_based_undirected_fix_c():
    assert not is_tree_based_undirected(fix("fix_c"))


def test_tree_based_undirected_tree():
    assert is_tree_based_undirected(tree())


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        budget = Budget(1e-3)
        time.sleep(0.01)
        c_orientation(fix("fix_b"), ANY, budget=budget, algorithm="exhaustive")


def test_unknown_algorithm():
    with pytest.raises(ValueError):
        c_orientation(fix("fix_a"), ANY, algorithm="greedy")


@settings(max_examples=25)
@given(st.integers(0, 5000))
def test_chain_reduce_recount(seed):
    net = random_undirected(seed, leaves=6 + seed % 6, reticulations=2, chain_length_range=(0, 6), simplify=True)
    red = chain_reduce(net, 3)
    for m in red.side_maps:
        survivors = sum(p in red.network.vertices for p in m.side.chain)
        want = 3 if not m.side.is_loop else max(3, 2)
        assert survivors == min(len(m.side.chain), want)


@settings(max_examples=12)
@given(st.integers(0, 5000))
def test_fpt_exhaustive_raw_agree(seed):
    net = single_blob_network(seed)
    if len(net.vertices) > 14:
        return
    for tag in NAMED_CLASSES:
        cls = NetworkClass(tag)
        fpt = rootable_edges_fpt(net, cls).edges()
        assert fpt == rootable_edges_exhaustive(net, cls).edges()
        assert fpt == raw_rootable(net, cls)


@settings(max_examples=15)
@given(st.integers(0, 5000))
def test_blob_soundness(seed):
    net = multi_blob_network(seed)
    for tag in NAMED_CLASSES:
        cls = NetworkClass(tag)
        result = c_orientation(net, cls)
        plan = result.plan
        empty_blob = any(len(r) == 0 for r in plan.rootable)
        assert result.found == (plan.failure is None)
        if empty_blob:
            assert not result.found
        for rs in plan.rootable:
            assert all(class_membership(d, cls) for d in rs.entries.values())
        if result.found:
            d = result.network
            assert class_membership(d, cls)
            assert underlying_network(d) == net
        assert result.found == bool(rootable_edges_exhaustive(net, cls))


@settings(max_examples=10)
@given(st.integers(0, 5000))
def test_rootable_edges_blob_matches_exhaustive(seed):
    net = multi_blob_network(seed)
    for tag in ("stack_free", "tree_based"):
        cls = NetworkClass(tag)
        assert rootable_edges(net, cls).edges() == rootable_edges_exhaustive(net, cls).edges()


@settings(max_examples=20)
@given(st.integers(0, 5000))
def test_tree_based_undirected_matches_spanning_trees(seed):
    k = 1 + seed % 3
    net = random_undirected(seed, leaves=k + 2 + seed % 3, reticulations=k)
    assert is_tree_based_undirected(net) == spanning_tree_tree_based(net)


@settings(max_examples=20)
@given(st.integers(0, 5000))
def test_tree_based_undirected_on_cubic_graphs(seed):
    net = cubic_with_leaves(seed, 6, 1 + seed % 4)
    if net.parallel_pair is not None or len(blob_decomposition(net).blobs) == 0:
        return
    assert is_tree_based_undirected(net) == spanning_tree_tree_based(net)


def test_rootable_set_contains_normalises():
    found = rootable_edges_exhaustive(fix("fix_a"), STACK_FREE)
    a, b = found.edges()[0]
    assert (b, a) in found and edge(a, b) in found
