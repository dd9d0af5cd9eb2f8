"""Seeded random binary networks for property tests and benchmarks."""
from __future__ import annotations

import random
from dataclasses import dataclass

import networkx as nx

from .network import DirectedNetwork, UndirectedNetwork, edge, underlying_network
from .structure import generator, graph_stats, reduce_pendant_subtrees


class InfeasibleConfig(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorConfig:
    leaf_count: int = 4
    target_level: int = 0
    target_reticulation_number: int = 0
    chain_length_range: tuple[int, int] | None = None
    rng_seed: int = 0
    max_attempts: int = 200

    def __post_init__(self):
        counts = [self.leaf_count, self.target_level, self.target_reticulation_number]
        if any(c < 0 for c in counts):
            raise InfeasibleConfig("counts must be non-negative")
        if self.leaf_count < 2:
            raise InfeasibleConfig("need at least two leaves")
        if self.target_level > self.target_reticulation_number:
            raise InfeasibleConfig("level cannot exceed the reticulation number")
        if self.target_reticulation_number > 0 and self.target_level == 0:
            raise InfeasibleConfig("a network with reticulations has level at least 1")
        if self.chain_length_range is not None:
            lo, hi = self.chain_length_range
            if lo < 0 or hi < lo:
                raise InfeasibleConfig(f"bad chain length range {self.chain_length_range}")


class _Builder:
    def __init__(self, rng: random.Random):
        self.rng = rng
        self.arcs: set[tuple[str, str]] = set()
        self.labels: dict[str, str] = {}
        self.count = 0

    def new(self) -> str:
        self.count += 1
        return f"v{self.count}"

    def subdivide(self, arc) -> str:
        u, v = arc
        s = self.new()
        self.arcs.discard(arc)
        self.arcs |= {(u, s), (s, v)}
        return s

    def add_leaf(self, arc) -> str:
        s = self.subdivide(arc)
        leaf = self.new()
        self.arcs.add((s, leaf))
        self.labels[leaf] = f"t{len(self.labels) + 1}"
        return s

    def random_arc(self, pool=None):
        return self.rng.choice(sorted(self.arcs if pool is None else pool))

    def ancestors(self, v: str) -> set[str]:
        parents: dict[str, list[str]] = {}
        for a, b in self.arcs:
            parents.setdefault(b, []).append(a)
        seen, stack = {v}, [v]
        while stack:
            for p in parents.get(stack.pop(), []):
                if p not in seen:
                    seen.add(p)
                    stack.append(p)
        return seen

    def add_reticulation(self, a1, a2) -> None:
        s = self.subdivide(a1)
        t = self.subdivide(a2)
        self.arcs.add((s, t))

    def network(self) -> DirectedNetwork:
        return DirectedNetwork.from_arcs(self.arcs, self.labels)


def _tree(rng: random.Random, leaves: int) -> _Builder:
    b = _Builder(rng)
    root, x, y = "v0", b.new(), b.new()
    b.arcs = {(root, x), (root, y)}
    b.labels = {x: "t1", y: "t2"}
    while len(b.labels) < leaves:
        b.add_leaf(b.random_arc())
    return b


def _level(b: _Builder) -> int:
    return graph_stats(underlying_network(b.network()))[1]


def _constructive_pair(b: _Builder, grow: bool):
    """Arc pair whose new arc keeps the level in check: both arcs inside the
    largest blob when growing it, otherwise two bridge arcs joined by bridges
    only (the new cycle is then a fresh level-1 blob)."""
    g = nx.Graph(list(b.arcs))
    if grow:
        best = max(nx.biconnected_components(g), key=lambda c: g.subgraph(c).number_of_edges() - len(c))
        pool = [a for a in b.arcs if a[0] in best and a[1] in best]
    else:
        bridges = {edge(*e) for e in nx.bridges(g)}
        forest = nx.Graph([tuple(e) for e in bridges])
        pool = [a for a in b.arcs if edge(*a) in bridges]
        if pool:
            a1 = b.random_arc(pool)
            region = nx.node_connected_component(forest, a1[0])
            same = [a for a in pool if a != a1 and a[0] in region and a[1] in region]
            return (a1, b.random_arc(same)) if same else None
    if len(pool) < 2:
        return None
    return b.random_arc(pool), b.random_arc(pool)


def _try_build(cfg: GeneratorConfig, rng: random.Random) -> DirectedNetwork | None:
    b = _tree(rng, cfg.leaf_count)
    k, level = cfg.target_reticulation_number, cfg.target_level
    for i in range(k):
        # the first `level` reticulations must pile into a single blob
        want_level = i + 1 if i < level else None
        for attempt in range(50):
            snapshot = (set(b.arcs), b.count)
            if attempt < 8 or (want_level is not None and i == 0):
                a1, a2 = b.random_arc(), b.random_arc()
            else:
                pair = _constructive_pair(b, want_level is not None)
                if pair is None:
                    return None
                a1, a2 = pair
            if a1 == a2 or a2[1] in b.ancestors(a1[0]):
                continue
            b.add_reticulation(a1, a2)
            lv = _level(b)
            if (want_level is not None and lv == want_level) or (want_level is None and lv <= level):
                break
            b.arcs, b.count = snapshot
        else:
            return None
    if cfg.chain_length_range is not None and k >= 2:
        _pad_chains(b, cfg.chain_length_range)
    net = b.network()
    if graph_stats(underlying_network(net)) != (k, level):
        return None
    return net


def _pad_chains(b: _Builder, length_range: tuple[int, int]) -> None:
    lo, hi = length_range
    net = b.network()
    und = underlying_network(net)
    if und.parallel_pair is not None:
        return
    root = net.root
    kids = list(net.children[root])

    def underlying_edge(a):
        # the two root arcs stand for one edge once the root is suppressed
        return edge(*kids) if a[0] == root else edge(*a)

    for side in generator(und).sides:
        want = b.rng.randint(lo, hi)
        side_edges = set(side.edges)
        for _ in range(max(0, want - len(side.chain))):
            pool = [a for a in b.arcs if underlying_edge(a) in side_edges]
            if not pool:
                break
            u, v = arc = b.random_arc(pool)
            s = b.add_leaf(arc)
            if u == root:
                other = kids[1] if kids[0] == v else kids[0]
                kids = [s, other]
                side_edges |= {edge(s, v), edge(s, other)}
            else:
                side_edges |= {edge(u, s), edge(s, v)}


def generate_random_directed(cfg: GeneratorConfig) -> DirectedNetwork:
    """Binary directed network with exactly the requested reticulation number
    and level, built from a random tree by adding arcs between subdivided arcs.
    The same config always yields the same network."""
    rng = random.Random(cfg.rng_seed)
    for _ in range(cfg.max_attempts):
        net = _try_build(cfg, rng)
        if net is not None:
            return net
    raise InfeasibleConfig(f"no network found for {cfg}")


def random_undirected(seed: int, leaves: int, reticulations: int, level: int | None = None,
                      chain_length_range: tuple[int, int] | None = None,
                      simplify: bool = False) -> UndirectedNetwork:
    """Underlying network of a random directed network (a parallel pair is
    avoided by retrying with the next seed)."""
    level = reticulations if level is None else level
    level = min(level, reticulations)
    if reticulations > 0:
        level = max(level, 1)
    for attempt in range(100):
        cfg = GeneratorConfig(leaves, level, reticulations, chain_length_range, seed * 1000 + attempt)
        und = underlying_network(generate_random_directed(cfg))
        if und.parallel_pair is not None:
            continue
        if simplify:
            und = reduce_pendant_subtrees(und)[0]
        return und
    raise InfeasibleConfig("could not avoid a parallel pair")


def chained_blob_network(blobs: int) -> UndirectedNetwork:
    """A path of K4-like blobs (each two triangles sharing an edge, 5 edges
    inside) joined by cut edges, with a leaf at each end and one per blob."""
    edges = []
    labels = {}
    prev = "x0"
    labels[prev] = "x0"
    for i in range(blobs):
        a, b, c, d = (f"a{i}", f"b{i}", f"c{i}", f"d{i}")
        edges += [(prev, a), (a, b), (a, c), (b, c), (b, d), (c, d)]
        leaf = f"y{i}"
        # consecutive blobs meet through a connector carrying one leaf
        if i < blobs - 1:
            edges.append((d, f"e{i}"))
            edges.append((f"e{i}", leaf))
            labels[leaf] = leaf
            prev = f"e{i}"
        else:
            edges.append((d, leaf))
            labels[leaf] = leaf
    return UndirectedNetwork.from_edges(edges, labels)


def chained_blob_instance(blobs: int):
    """Orientable rooted instance on ``chained_blob_network``: root next to the
    first leaf, reticulations b_i and d_i."""
    from .orient import RootedInstance

    net = chained_blob_network(blobs)
    retics = [f"b{i}" for i in range(blobs)] + [f"d{i}" for i in range(blobs)]
    return RootedInstance.binary(net, edge("x0", "a0"), retics)

