import pytest
from hypothesis import given, strategies as st

from netorient.fixtures import MissingFixture, load_fixture
from netorient.network import (DegreeMap, DirectedNetwork, NetworkError, ParseError,
                               PartlyDirectedNetwork, UndirectedNetwork, edge, format_network, parse_network,
                               parse_network_file, to_dot, underlying_network)
from netorient.suite import random_directed


def test_fix_a_parses_with_hints():
    parsed = load_fixture("fix_a")
    net = parsed.network
    assert isinstance(net, UndirectedNetwork)
    assert len(net.vertices) == 6 and len(net.edges) == 7
    assert parsed.root_edge == edge("a", "b")
    assert parsed.reticulations == {"b": 2, "c": 2}


def test_fix_c_counts():
    net = load_fixture("fix_c").network
    assert (len(net.vertices), len(net.edges)) == (26, 37)


def test_partly_directed_fixtures():
    for name in ("fix_d_l", "fix_d_r"):
        pd = load_fixture(name).network
        assert isinstance(pd, PartlyDirectedNetwork)
        assert len(pd.arcs) == 6 and len(pd.edges) == 6
        assert len(pd.vertices) - len(pd.leaf_labels) == 7


def test_single_edge_two_leaves():
    net = parse_network("edge a b\nleaf a a\nleaf b b\n")
    assert net.edges == {edge("a", "b")}
    with pytest.raises(NetworkError):
        UndirectedNetwork(frozenset("ab"), frozenset({edge("a", "b")}), {"a": "a"})


@pytest.mark.parametrize("text", [
    "edge a b\nedge b a\nleaf a a\nleaf b b\n",
    "edge a b\nedge a b\n",
    "edge a a\n",
    "edge a\n",
    "frobnicate a b\n",
    "retic x two\nedge a b\n",
    "",
])
def test_parse_errors(text):
    with pytest.raises((ParseError, NetworkError)):
        parse_network(text)


def test_parse_error_carries_line():
    with pytest.raises(ParseError, match="Line 2"):
        parse_network("edge a b\nedge a b\n")


def test_degree_two_vertex_rejected():
    with pytest.raises(NetworkError) as info:
        parse_network("edge x a\nedge a y\nleaf x x\nleaf y y\n")
    assert info.value.invariant == "no-degree-2"


def test_directed_two_leaf_tree_suppresses_root():
    d = DirectedNetwork.from_arcs([("r", "x"), ("r", "y")], {"x": "x", "y": "y"})
    und = underlying_network(d)
    assert und.edges == {edge("x", "y")}
    assert und.parallel_pair is None


def test_parallel_pair_flagged():
    # root children p, q are adjacent: suppressing the root doubles {p, q}
    d = DirectedNetwork.from_arcs([("r", "p"), ("r", "q"), ("p", "q"), ("p", "x"), ("q", "y")],
                                  {"x": "x", "y": "y"})
    und = underlying_network(d)
    assert und.parallel_pair == edge("p", "q")
    assert und.reticulation_number == 1


def test_directed_invariants():
    with pytest.raises(NetworkError) as info:
        DirectedNetwork.from_arcs([("r", "a"), ("r", "b"), ("a", "b"), ("b", "a")])
    assert info.value.invariant in ("simple", "single-root")
    with pytest.raises(NetworkError) as info:
        DirectedNetwork.from_arcs([("r", "a"), ("r", "x"), ("a", "y")], {"x": "x", "y": "y"})
    assert info.value.invariant == "no-indeg1-outdeg1"


def test_trusted_constructor_matches_validated():
    d = load_fixture("wheat_d").network
    t = DirectedNetwork.trusted(d.vertices, d.arcs, d.leaf_labels, d.root)
    assert t == d and t.reticulations == d.reticulations


def test_degree_map_validation():
    net = load_fixture("fix_a").network
    DegreeMap({"b": 2}).validate_for(net)
    for bad in ({"x": 2}, {"b": 3}, {"zz": 1}, {"b": 0}):
        with pytest.raises(NetworkError):
            DegreeMap(bad).validate_for(net)


def test_partly_directed_rejects_antiparallel():
    with pytest.raises(NetworkError):
        PartlyDirectedNetwork.from_parts([("a", "x")], [("a", "b"), ("b", "a")])


def test_dot_output():
    pd = load_fixture("fix_d_l").network
    dot = to_dot(pd)
    assert dot.startswith("digraph")
    assert dot.count("[dir=none]") == len(pd.edges)
    assert dot.count("doublecircle") == len(pd.arc_reticulations)
    und = to_dot(load_fixture("fix_a").network, reticulations={"b"})
    assert und.startswith("graph") and " -- " in und and "doublecircle" in und


def test_corrupted_fixture_is_missing(tmp_path):
    (tmp_path / "fix_a.net").write_text("edge a\n")
    with pytest.raises(MissingFixture):
        load_fixture("fix_a", tmp_path)
    with pytest.raises(MissingFixture):
        load_fixture("nope")


@given(st.integers(0, 10**6))
def test_format_parse_round_trip(seed):
    d = random_directed(seed)
    assert parse_network(format_network(d)) == d
    und = underlying_network(d)
    if und.parallel_pair is None:
        back = parse_network_file(format_network(und, root_edge=d.root_edge, reticulations=d.reticulations))
        assert back.network == und
        assert back.network.leaf_labels == und.leaf_labels
        assert back.root_edge == d.root_edge
        assert set(back.reticulations) == set(d.reticulations)


@given(st.integers(0, 10**6))
def test_underlying_counts(seed):
    d = random_directed(seed)
    und = underlying_network(d)
    # the root and its two arcs become one edge
    assert und.edge_count == len(d.arcs) - 1
    assert len(und.vertices) == len(d.vertices) - 1
    assert d.root not in und.vertices
    assert und.reticulation_number == len(d.reticulations)


def test_build_order_is_not_identity():
    edges = [("x", "a"), ("a", "b"), ("a", "c"), ("b", "c"), ("b", "d"), ("c", "d"), ("d", "y")]
    one = UndirectedNetwork.from_edges(edges)
    two = UndirectedNetwork.from_edges(list(reversed(edges)))
    assert one == two and hash(one) == hash(two)
    assert one.edge_order != two.edge_order
    assert set(one.edge_order) == one.edges


def test_build_order_must_match_edges():
    with pytest.raises(ValueError):
        UndirectedNetwork(frozenset("xyab"), frozenset({("a", "x"), ("a", "b"), ("b", "y")}), {},
                          input_order=(("a", "x"),))
