import pytest
from hypothesis import given, settings, strategies as st

from netorient.generate import (GeneratorConfig, InfeasibleConfig, chained_blob_instance, chained_blob_network,
                                generate_random_directed)
from netorient.network import DirectedNetwork, format_network, parse_network, underlying_network
from netorient.orient import orient
from netorient.structure import blob_decomposition, generator, graph_stats


def test_tree_on_five_leaves():
    d = generate_random_directed(GeneratorConfig(5, 0, 0, None, 1))
    assert len(d.leaves) == 5 and not d.reticulations
    assert d.is_binary and len(d.arcs) == 2 * 5 - 2


def test_level_two_example():
    d = generate_random_directed(GeneratorConfig(4, 2, 2, None, 7))
    assert d.is_binary and len(d.leaves) == 4
    assert graph_stats(underlying_network(d)) == (2, 2)


def test_same_config_same_network():
    cfg = GeneratorConfig(6, 2, 3, (0, 3), 11)
    assert generate_random_directed(cfg) == generate_random_directed(cfg)


@pytest.mark.parametrize("args", [(1, 0, 0), (4, 3, 2), (4, 0, 2), (-1, 0, 0)])
def test_infeasible_configs(args):
    with pytest.raises(InfeasibleConfig):
        generate_random_directed(GeneratorConfig(*args))


def test_bad_chain_range():
    with pytest.raises(InfeasibleConfig):
        GeneratorConfig(4, 1, 1, (3, 1))


def test_chained_blob_instance_orients():
    inst = chained_blob_instance(5)
    result = orient(inst)
    assert result.oriented
    assert underlying_network(result.network) == chained_blob_network(5)
    assert len(blob_decomposition(chained_blob_network(5)).blobs) == 5


@settings(max_examples=40)
@given(st.integers(0, 10_000), st.integers(0, 4), st.integers(2, 8))
def test_generated_networks_are_valid(seed, k, leaves):
    level = 1 + seed % k if k else 0
    try:
        d = generate_random_directed(GeneratorConfig(leaves, level, k, None, seed))
    except InfeasibleConfig:
        return
    DirectedNetwork(d.vertices, d.arcs, d.leaf_labels, d.root)  # full validation
    assert d.is_binary and len(d.reticulations) == k
    und = underlying_network(d)
    assert graph_stats(und) == (k, level)
    if und.parallel_pair is None:
        assert parse_network(format_network(und)) == und


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_chains_padded_to_lower_bound(seed):
    d = generate_random_directed(GeneratorConfig(4, 2, 2, (2, 3), seed))
    und = underlying_network(d)
    if und.parallel_pair is not None:
        return
    assert all(len(side.chain) >= 2 for side in generator(und).sides)
