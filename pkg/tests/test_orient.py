import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from netorient.fixtures import load_fixture
from netorient.network import (ROOT_ID, DegreeMap, PartlyDirectedNetwork, UndirectedNetwork, edge,
                               underlying_network)
from netorient.orient import (CUT_UNEXTRACTED, DegreeCut, RootedInstance, brute_force_orientations,
                              check_stack_free_rooted, find_degree_cut, is_semi_directed, orient, orient_binary,
                              orient_partly_directed, validate_degree_cut)
from netorient.suite import random_directed, small_rooted_instance


def fix(name):
    return load_fixture(name).network


def tree():
    return UndirectedNetwork.from_edges([("x1", "p"), ("x2", "p"), ("p", "q"), ("q", "x3"), ("q", "r"),
                                         ("r", "x4"), ("r", "x5")])


def pendant_of(net, label):
    leaf = net.leaf_by_label(label)
    return edge(leaf, net.adjacency[leaf][0])


def fix_a_instance():
    parsed = load_fixture("fix_a")
    return RootedInstance.binary(parsed.network, parsed.root_edge, parsed.reticulations)


def test_fix_a_declared_instance_has_reticulation_cut():
    inst = fix_a_instance()
    result = orient(inst)
    assert not result.oriented and result.reason == "degree_cut"
    assert result.cut.v_prime == {"b", "c"}
    assert result.cut.e_prime == {edge(ROOT_ID, "b"), edge("a", "c")}
    assert validate_degree_cut(inst, result.cut) == []
    assert find_degree_cut(inst) == result.cut
    assert brute_force_orientations(inst.network, inst.root_edge, inst.degrees) == []


def test_validator_rejects_wrong_cut():
    inst = fix_a_instance()
    assert validate_degree_cut(inst, DegreeCut(frozenset({"b"}), frozenset({edge("a", "b")})))


@pytest.mark.parametrize("root", sorted(tree().edges))
def test_tree_orients_away_from_root(root):
    net = tree()
    result = orient(RootedInstance(net, root, DegreeMap({})))
    assert result.oriented
    d = result.network
    # breadth-first depth from the root strictly increases along every arc
    depth, frontier = {ROOT_ID: 0}, [ROOT_ID]
    while frontier:
        nxt = []
        for u in frontier:
            for w in d.children[u]:
                depth[w] = depth[u] + 1
                nxt.append(w)
        frontier = nxt
    assert all(depth[v] == depth[u] + 1 for u, v in d.arcs)
    assert find_degree_cut(RootedInstance(net, root, DegreeMap({}))) is None
    assert len(brute_force_orientations(net, root, DegreeMap({}))) == 1


def test_fix_b_pendant_root_matches_oracle():
    net = fix("fix_b")
    root = pendant_of(net, "x")
    admitted = 0
    for retics in itertools.combinations(net.internal_vertices, net.reticulation_number):
        brute = brute_force_orientations(net, root, DegreeMap.from_reticulations(retics))
        result = orient_binary(net, root, retics)
        assert result.oriented == bool(brute)
        if brute:
            admitted += 1
            assert result.network.arcs == brute[0].arcs
    assert admitted > 0


def test_fix_a_orient_binary_examples():
    net = fix("fix_a")
    no = orient_binary(net, edge("a", "b"), {"b", "c"})
    assert not no.oriented and no.cut.v_prime == {"b", "c"} and no.cut.kind == "reticulation"
    other = orient_binary(net, edge("a", "b"), {"c", "d"})
    brute = brute_force_orientations(net, edge("a", "b"), DegreeMap.from_reticulations({"c", "d"}))
    assert other.oriented == bool(brute)
    if brute:
        assert other.network.arcs == brute[0].arcs


def test_sum_mismatch():
    result = orient_binary(fix("fix_a"), edge("a", "b"), {"b"})
    assert result.reason == "sum_mismatch" and result.cut is None


def test_stack_free_rooted_examples():
    net = fix("fix_a")
    assert not check_stack_free_rooted(net, edge("a", "b"), {"b", "c"})
    assert check_stack_free_rooted(tree(), edge("p", "q"), set())
    fixb = fix("fix_b")
    orientable = 0
    for e in fixb.sorted_edges:
        for retics in itertools.combinations(fixb.internal_vertices, 3):
            if orient_binary(fixb, e, retics).oriented:
                orientable += 1
                assert not check_stack_free_rooted(fixb, e, retics)
    assert orientable > 0


def test_adjacent_reticulations_are_not_stack_free():
    # some orientable choice on FIX-A puts reticulations on both ends of an edge
    net = fix("fix_a")
    hits = 0
    for e in net.sorted_edges:
        for r in net.sorted_edges:
            if set(r) & set(net.leaf_labels) or not orient_binary(net, e, r).oriented:
                continue
            hits += 1
            assert not check_stack_free_rooted(net, e, r)
    assert hits > 0


def test_partly_directed_fix_d_left():
    pd = fix("fix_d_l")
    retics = pd.arc_reticulations
    assert retics == {"b", "c", "f"}
    verdicts = {}
    for root in sorted(pd.edges):
        result = orient_partly_directed(pd, root, retics)
        brute = [d for d in brute_force_orientations(pd.underlying, root, DegreeMap.from_reticulations(retics))
                 if set(pd.arcs) <= d.arcs]
        assert result.oriented == bool(brute)
        if brute:
            assert result.network == brute[0]
        verdicts[root] = result.oriented
    # c already has two incoming arcs, so a root beside x would give it a third
    assert not verdicts[pendant_of(pd.underlying, "x")]
    assert verdicts[edge("d", "e")]


def test_flipped_arc_conflicts():
    pd = fix("fix_d_l")
    root, retics = edge("d", "e"), pd.arc_reticulations
    assert orient_partly_directed(pd, root, retics).oriented
    flipped = PartlyDirectedNetwork(pd.vertices, pd.edges, (pd.arcs - {("a", "b")}) | {("b", "a")},
                                    pd.leaf_labels)
    bad = orient_partly_directed(flipped, root, retics)
    assert not bad.oriented and bad.reason == "arc_conflict"


def test_partly_directed_without_arcs_is_binary():
    net = fix("fix_a")
    pd = PartlyDirectedNetwork(net.vertices, net.edges, frozenset(), net.leaf_labels)
    for e in net.sorted_edges:
        a = orient_partly_directed(pd, e, {"b", "d"})
        b = orient_binary(net, e, {"b", "d"})
        assert a == b


def test_semi_directed_examples():
    yes, (root, d) = is_semi_directed(fix("fix_d_l"))
    assert yes and set(fix("fix_d_l").arcs) <= d.arcs
    assert is_semi_directed(fix("fix_d_r")) == (False, None)
    t = tree()
    assert is_semi_directed(PartlyDirectedNetwork(t.vertices, t.edges, frozenset(), t.leaf_labels))[0]


def test_wheat_is_an_orientation_of_its_underlying_network():
    d = fix("wheat_d")
    und = underlying_network(d)
    result = orient_binary(und, d.root_edge, d.reticulations)
    assert result.oriented
    assert result.network.arcs == {(ROOT_ID if u == d.root else u, v) for u, v in d.arcs}


@given(st.integers(0, 10**6))
def test_matches_brute_force(seed):
    inst = small_rooted_instance(seed)
    result = orient(inst)
    brute = brute_force_orientations(inst.network, inst.root_edge, inst.degrees)
    assert len(brute) <= 1
    assert result.oriented == bool(brute)
    if brute:
        assert result.network.arcs == brute[0].arcs
    elif result.reason == "degree_cut":
        assert validate_degree_cut(inst, result.cut) == []
    else:
        assert result.reason in ("sum_mismatch", CUT_UNEXTRACTED)


@given(st.integers(0, 10**6))
def test_general_degree_maps(seed):
    rng = random.Random(seed)
    base = small_rooted_instance(seed)
    net = base.network
    degrees = {v: rng.randint(1, net.degree(v) - 1) for v in net.internal_vertices}
    inst = RootedInstance(net, base.root_edge, DegreeMap(degrees))
    result = orient(inst)
    brute = brute_force_orientations(net, inst.root_edge, inst.degrees)
    assert result.oriented == bool(brute)
    if brute:
        assert result.network.arcs == brute[0].arcs
        assert all(result.network.indegrees[v] == inst.degrees[v] for v in net.vertices)
    elif result.cut is not None:
        assert validate_degree_cut(inst, result.cut) == []


@given(st.integers(0, 10**6))
def test_queue_order_does_not_matter(seed):
    inst = small_rooted_instance(seed)
    fifo, lifo = orient(inst, "fifo"), orient(inst, "lifo")
    assert fifo.oriented == lifo.oriented
    if fifo.oriented:
        assert fifo.network == lifo.network


@given(st.integers(0, 10**6))
def test_generating_orientation_is_recovered(seed):
    d = random_directed(seed)
    und = underlying_network(d)
    if und.parallel_pair is not None:
        return
    result = orient_binary(und, d.root_edge, d.reticulations)
    assert result.oriented
    renamed = {(ROOT_ID if u == d.root else u, v) for u, v in d.arcs}
    assert result.network.arcs == renamed
    # deleting the reticulations leaves a forest
    g = nx.Graph()
    g.add_nodes_from(set(und.vertices) - d.reticulations)
    g.add_edges_from(e for e in und.edges if not set(e) & d.reticulations)
    assert nx.is_forest(g)


@given(st.integers(0, 10_000))
def test_orientation_independent_of_edge_order(seed):
    inst = small_rooted_instance(seed)
    edges = list(inst.network.edges)
    random.Random(seed).shuffle(edges)
    shuffled = UndirectedNetwork.from_edges(edges, inst.network.leaf_labels, inst.network.parallel_pair)
    other = RootedInstance(shuffled, inst.root_edge, inst.degrees)
    a, b = orient(inst), orient(other)
    assert a.oriented == b.oriented
    if a.oriented:
        assert a.network == b.network
    else:
        assert not validate_degree_cut(other, b.cut)
