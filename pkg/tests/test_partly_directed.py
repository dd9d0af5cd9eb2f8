from hypothesis import given, settings, strategies as st

from netorient.fixtures import load_fixture
from netorient.network import PartlyDirectedNetwork, edge, underlying_network
from netorient.partly_directed import partly_directed_c_orientation

from oracles import partly_directed_extends, partly_directed_instance


def fix(name):
    return load_fixture(name).network


def with_arcs(edges, arcs):
    leaves = {v for e in edges + arcs for v in e if v.startswith("x")}
    directed = {edge(*a) for a in arcs}
    return PartlyDirectedNetwork.from_parts([e for e in edges if edge(*e) not in directed], arcs,
                                            {v: v for v in leaves})


def check_consistent(pd, result):
    d = result.network
    assert set(pd.arcs) <= d.arcs
    assert underlying_network(d) == pd.underlying


def test_fix_d_left():
    pd = fix("fix_d_l")
    result = partly_directed_c_orientation(pd)
    assert result.found
    check_consistent(pd, result)
    assert partly_directed_extends(pd)


def test_fix_d_right():
    pd = fix("fix_d_r")
    result = partly_directed_c_orientation(pd)
    assert not result.found
    assert not partly_directed_extends(pd)


def test_cut_arcs_facing_each_other():
    edges = [("x1", "p"), ("x2", "p"), ("p", "q"), ("q", "x5"), ("q", "r"), ("r", "x3"), ("r", "x4")]
    pd = with_arcs(edges, [("p", "q"), ("r", "q")])
    result = partly_directed_c_orientation(pd)
    assert not result.found and result.reason == "cut_edge_conflict"
    assert not partly_directed_extends(pd)


def test_side_alternation():
    # theta between u and v; the long side u-p1-p2-p3-v reads right, left, right, left
    edges = [("u", "q"), ("q", "v"), ("q", "x0"), ("u", "s"), ("s", "v"), ("s", "x9"),
             ("u", "p1"), ("p1", "p2"), ("p2", "p3"), ("p3", "v"), ("p1", "x1"), ("p2", "x2"), ("p3", "x3")]
    pd = with_arcs(edges, [("u", "p1"), ("p2", "p1"), ("p2", "p3"), ("v", "p3")])
    result = partly_directed_c_orientation(pd)
    assert not result.found and result.reason == "side_alternation"
    assert not partly_directed_extends(pd)


def test_arc_out_of_leaf():
    pd = fix("fix_d_l")
    x = pd.underlying.leaf_by_label("x")
    (a,) = [w for w in pd.underlying.adjacency[x]]
    bad = PartlyDirectedNetwork(pd.vertices, pd.edges - {edge(x, a)}, pd.arcs | {(x, a)}, pd.leaf_labels)
    result = partly_directed_c_orientation(bad)
    assert not result.found and result.reason == "arc_out_of_leaf"


def test_no_arcs_is_plain_orientation():
    pd = PartlyDirectedNetwork.from_parts(list(fix("fix_d_l").underlying.edges), [],
                                          fix("fix_d_l").leaf_labels)
    assert partly_directed_c_orientation(pd).found


@settings(max_examples=60)
@given(st.integers(0, 100_000))
def test_matches_brute_force(seed):
    pd = partly_directed_instance(seed)
    if pd is None:
        return
    result = partly_directed_c_orientation(pd)
    assert result.found == partly_directed_extends(pd)
    if result.found:
        check_consistent(pd, result)
