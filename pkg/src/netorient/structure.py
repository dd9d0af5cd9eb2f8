"""Structural decomposition of undirected networks: blobs, statistics,
pendant-subtree reduction and generators with their sides."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import networkx as nx

from .network import Edge, FRESH_PREFIX, UndirectedNetwork, edge, fresh_ids

_PARALLEL_STUB = FRESH_PREFIX + "_parallel"


def _nx_graph(net: UndirectedNetwork) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(net.vertices)
    g.add_edges_from(net.edges)
    if net.parallel_pair is not None:
        # the implicit second copy becomes a path through a stub vertex
        a, b = net.parallel_pair
        g.add_edge(a, _PARALLEL_STUB)
        g.add_edge(_PARALLEL_STUB, b)
    return g


@dataclass(frozen=True)
class BlobDecomposition:
    blobs: tuple[frozenset, ...]
    cut_edges: tuple[Edge, ...]
    cut_vertices: frozenset
    # (block index, cut vertex) incidences; block i is blobs[i] for i < len(blobs),
    # later indices are the bridges in cut_edges order
    block_cut_tree: tuple[tuple[int, str], ...]

    def blob_of(self, v: str) -> int | None:
        for i, b in enumerate(self.blobs):
            if v in b:
                return i
        return None


def blob_decomposition(net: UndirectedNetwork) -> BlobDecomposition:
    g = _nx_graph(net)
    blobs = []
    for comp in nx.biconnected_components(g):
        comp = set(comp) - {_PARALLEL_STUB}
        if len(comp) >= 3 or (net.parallel_pair is not None and comp == set(net.parallel_pair)):
            blobs.append(frozenset(comp))
    blobs.sort(key=lambda b: min(b))
    cut_edges = sorted(edge(u, v) for u, v in nx.bridges(g) if _PARALLEL_STUB not in (u, v))
    cut_vertices = frozenset(nx.articulation_points(g)) - {_PARALLEL_STUB}
    tree = []
    for i, b in enumerate(blobs):
        tree += [(i, c) for c in sorted(b & cut_vertices)]
    for j, e in enumerate(cut_edges):
        tree += [(len(blobs) + j, c) for c in e if c in cut_vertices]
    return BlobDecomposition(tuple(blobs), tuple(cut_edges), cut_vertices, tuple(tree))


def blob_edges(net: UndirectedNetwork, blob: Iterable[str]) -> list[Edge]:
    blob = set(blob)
    return sorted(e for e in net.edges if e[0] in blob and e[1] in blob)


def graph_stats(net: UndirectedNetwork) -> tuple[int, int]:
    """(reticulation number, level)."""
    level = 0
    for b in blob_decomposition(net).blobs:
        m = len(blob_edges(net, b))
        if net.parallel_pair is not None and set(net.parallel_pair) <= b:
            m += 1
        level = max(level, m - len(b) + 1)
    return net.reticulation_number, level


def is_orientable(net: UndirectedNetwork) -> bool:
    """At most one blob that touches the rest of the network through a single cut vertex."""
    dec = blob_decomposition(net)
    terminal = sum(1 for b in dec.blobs if len(b & dec.cut_vertices) == 1)
    return terminal <= 1


def _core(net: UndirectedNetwork) -> set[str]:
    """Vertices surviving repeated deletion of degree-1 vertices."""
    deg = dict(net.degrees)
    alive = set(net.vertices)
    stack = [v for v in net.vertices if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in net.adjacency[v]:
            if w in alive:
                deg[w] -= 1
                if deg[w] == 1:
                    stack.append(w)
    return alive


def _subtree(net: UndirectedNetwork, core: set[str], top: str) -> tuple[set[str], set[Edge]]:
    verts, edges = {top}, set()
    stack = [top]
    while stack:
        u = stack.pop()
        for w in net.adjacency[u]:
            if w in core or w in verts:
                continue
            verts.add(w)
            edges.add(edge(u, w))
            stack.append(w)
    return verts, edges


def reduce_pendant_subtrees(net: UndirectedNetwork) -> tuple[UndirectedNetwork, dict[Edge, frozenset]]:
    """Collapse each pendant subtree with two or more leaves to a single leaf.

    The mapping sends each new pendant edge to the edges it stands for (the
    pendant edge itself included).
    """
    core = _core(net)
    if not core and len(net.edges) == 1:
        return net, {}
    if not core:
        by_label = sorted(net.leaf_labels.items(), key=lambda kv: kv[1])
        (x, lx), (y, ly) = by_label[0], by_label[1]
        reduced = UndirectedNetwork(frozenset({x, y}), frozenset({edge(x, y)}), {x: lx, y: ly})
        return reduced, {edge(x, y): frozenset(net.edges)}
    drop: set[str] = set()
    labels = {v: lab for v, lab in net.leaf_labels.items()}
    mapping: dict[Edge, frozenset] = {}
    new_tops = []
    for c in sorted(core):
        for t in net.adjacency[c]:
            if t in core or t in net.leaf_labels:
                continue
            verts, edges = _subtree(net, core, t)
            drop |= verts - {t}
            mapping[edge(c, t)] = frozenset(edges | {edge(c, t)})
            new_tops.append(t)
    if not new_tops:
        return net, {}
    for v in drop:
        labels.pop(v, None)
    names = fresh_ids(set(labels.values()) | set(net.vertices), len(new_tops))
    for t, name in zip(new_tops, names):
        labels[t] = name
    vertices = set(net.vertices) - drop
    edges = {e for e in net.edges if e[0] in vertices and e[1] in vertices}
    return UndirectedNetwork(frozenset(vertices), frozenset(edges), labels, net.parallel_pair), mapping


class GeneratorUndefined(ValueError):
    pass


@dataclass(frozen=True)
class Side:
    u: str
    v: str
    path: tuple[str, ...]  # internal vertices from u to v
    chain: tuple[str, ...]  # pendant vertex hanging off each internal vertex, same order
    edges: tuple[Edge, ...]  # e_0 .. e_n from u to v

    @property
    def key(self):
        return (self.u, self.v, min(self.path) if self.path else "")

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class Generator:
    vertices: tuple[str, ...]
    sides: tuple[Side, ...]

    def side_of_edge(self) -> dict[Edge, int]:
        out = {}
        for i, s in enumerate(self.sides):
            for e in s.edges:
                out[e] = i
        return out

    def side_of_pendant(self) -> dict[str, int]:
        """Pendant vertex -> index of the side it hangs off."""
        return {p: i for i, s in enumerate(self.sides) for p in s.chain}


def generator(net: UndirectedNetwork) -> Generator:
    if net.reticulation_number < 2:
        raise GeneratorUndefined(f"generator undefined for reticulation number {net.reticulation_number}")
    core = _core(net)
    # multigraph over core with explicit edge ids so the parallel copy is walkable
    cedges: list[Edge] = sorted(e for e in net.edges if e[0] in core and e[1] in core)
    if net.parallel_pair is not None:
        cedges.append(net.parallel_pair)
    inc: dict[str, list[int]] = {v: [] for v in core}
    for i, (a, b) in enumerate(cedges):
        inc[a].append(i)
        inc[b].append(i)
    gverts = sorted(v for v in core if len(inc[v]) >= 3)
    used = [False] * len(cedges)
    sides = []
    for start in gverts:
        for first in inc[start]:
            if used[first]:
                continue
            path, walk_edges = [], []
            cur, eid = start, first
            while True:
                used[eid] = True
                a, b = cedges[eid]
                nxt = b if a == cur else a
                walk_edges.append(edge(cur, nxt))
                if len(inc[nxt]) >= 3:
                    break
                path.append(nxt)
                (eid,) = [x for x in inc[nxt] if x != eid]
                cur = nxt
            end = nxt
            u, v = start, end
            if u > v or (u == v and path and path[0] > path[-1]):
                u, v = v, u
                path.reverse()
                walk_edges.reverse()
            chain = []
            for p in path:
                chain += [w for w in net.adjacency[p] if w not in core]
            sides.append(Side(u, v, tuple(path), tuple(chain), tuple(walk_edges)))
    sides.sort(key=lambda s: s.key)
    return Generator(tuple(gverts), tuple(sides))


def find_blob(net: UndirectedNetwork, blob: Iterable[str]) -> frozenset:
    blob = frozenset(blob)
    if blob not in blob_decomposition(net).blobs:
        raise ValueError(f"{sorted(blob)} is not a blob of the network")
    return blob


def induced_blob(net: UndirectedNetwork, blob: Iterable[str]) -> tuple[UndirectedNetwork, dict[str, str]]:
    """Induced network of a blob plus the map fresh leaf -> blob vertex it hangs off."""
    blob = find_blob(net, blob)
    edges = blob_edges(net, blob)
    deg = {v: 0 for v in blob}
    for a, b in edges:
        deg[a] += 1
        deg[b] += 1
    attach_points = sorted(v for v in blob if deg[v] == 2)
    names = fresh_ids(set(net.vertices) | set(net.leaf_labels.values()), len(attach_points))
    attach = dict(zip(names, attach_points))
    edges += [edge(leaf, v) for leaf, v in attach.items()]
    vertices = set(blob) | set(attach)
    return UndirectedNetwork(frozenset(vertices), frozenset(edges), {x: x for x in attach}), attach


def induced_blob_network(net: UndirectedNetwork, blob: Iterable[str]) -> UndirectedNetwork:
    return induced_blob(net, blob)[0]


def blob_cut_edges(net: UndirectedNetwork, blob: frozenset) -> dict[str, Edge]:
    """Blob vertex -> the cut edge leaving the blob there (degree-2 blob vertices only)."""
    out = {}
    for v in blob:
        outside = [w for w in net.adjacency[v] if w not in blob]
        if len(outside) == 1:
            out[v] = edge(v, outside[0])
    return out
