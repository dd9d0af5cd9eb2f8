"""Completing a partly-directed network to a directed one.

Known directions are first spread along cut edges and into blob entry
points. Each generator side is then checked for impossible zig-zags, and its
leaves are thinned out, keeping those that sit where the direction flips.
The thinned network is solved blob by blob, and the reticulations found
there are replayed on the original network.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .class_orient import Budget, assemble, choose_root_edge, plan_blobs
from .classes import NetworkClass
from .network import Arc, DirectedNetwork, Edge, PartlyDirectedNetwork, UndirectedNetwork, edge
from .orient import orient_partly_directed
from .structure import blob_decomposition, generator

KEEP_PER_SIDE = 2


@dataclass(frozen=True)
class PartlyDirectedOrientation:
    network: DirectedNetwork | None
    reason: str | None = None
    root_edge: Edge | None = None

    @property
    def found(self) -> bool:
        return self.network is not None


def _no(reason: str) -> PartlyDirectedOrientation:
    return PartlyDirectedOrientation(None, reason)


class _Conflict(Exception):
    def __init__(self, reason: str):
        self.reason = reason


def _force(dirs: dict[Edge, Arc], arc: Arc, reason: str) -> None:
    e = edge(*arc)
    if dirs.get(e, arc) != arc:
        raise _Conflict(reason)
    dirs[e] = arc


def _spread_cut_arcs(und: UndirectedNetwork, dirs: dict[Edge, Arc]) -> None:
    """Everything beyond the head of a directed cut edge points away from it;
    a blob entered there is left along both of its blob edges."""
    dec = blob_decomposition(und)
    cuts = set(dec.cut_edges)
    for x, y in sorted(a for e, a in dirs.items() if e in cuts):
        seen = {x, y}
        queue = deque([y])
        while queue:
            u = queue.popleft()
            for w in sorted(und.adjacency[u]):
                if w in seen:
                    continue
                seen.add(w)
                queue.append(w)
                if edge(u, w) in cuts:
                    _force(dirs, (u, w), "cut_edge_conflict")
    for x, y in sorted(a for e, a in dirs.items() if e in cuts):
        b = dec.blob_of(y)
        if b is None:
            continue
        for w in sorted(und.adjacency[y]):
            if w in dec.blobs[b]:
                _force(dirs, (y, w), "blob_entry_conflict")


def _close(und: UndirectedNetwork, dirs: dict[Edge, Arc]) -> None:
    """Repeat until stable: spread cut arcs, and give every vertex already
    entered by two arcs an outgoing third edge."""
    while True:
        before = len(dirs)
        _spread_cut_arcs(und, dirs)
        for v in sorted(und.internal_vertices):
            nbrs = und.adjacency[v]
            into = [w for w in nbrs if dirs.get(edge(v, w)) == (w, v)]
            if len(into) >= len(nbrs) - 1:
                for w in nbrs:
                    if w not in into:
                        _force(dirs, (v, w), "indegree_conflict")
        if len(dirs) == before:
            return


def side_signs(side, dirs: dict[Edge, Arc]) -> list[int]:
    """+1 where e_m points towards v, -1 towards u, 0 if undirected."""
    nodes = [side.u, *side.path, side.v]
    out = []
    for m, e in enumerate(side.edges):
        arc = dirs.get(e)
        out.append(0 if arc is None else (1 if arc == (nodes[m], nodes[m + 1]) else -1))
    return out


def protected_positions(signs: list[int]) -> set[int]:
    """Chain positions (0-based) whose leaves must survive thinning.

    Directed edges cut the side into gaps of undirected edges. A reticulation
    or the root can sit in an end gap, in a gap where the direction flips, or
    (with the root nearby, or on a loop side closing a cycle) in a gap between
    two arcs that agree. Inside a gap it can slide to a boundary vertex, so
    the leaves at gap boundaries are kept: merging a directed edge with an
    undirected one would otherwise fix a direction the answer may need to
    reverse. Edge e_m runs from position m - 1 to position m.
    """
    n = len(signs) - 1
    if n <= 0:
        return set()
    directed = [m for m, s in enumerate(signs) if s]
    if not directed:
        return {0, n - 1}
    out = {m for m in range(n) if bool(signs[m]) != bool(signs[m + 1])}
    if directed[0] > 0:
        out |= {0, directed[0] - 1}
    for a, b in zip(directed, directed[1:]):
        if signs[a] != signs[b]:
            out |= {a, b - 1}
    if directed[-1] < n:
        out |= {directed[-1], n - 1}
    return out


def _alternates_twice(signs: list[int]) -> bool:
    runs = []
    for s in signs:
        if s and (not runs or runs[-1] != s):
            runs.append(s)
    return len(runs) >= 4


class _Thinner:
    """Mutable mixed graph supporting leaf deletion with suppression."""

    def __init__(self, und: UndirectedNetwork, dirs: dict[Edge, Arc]):
        self.adj = {v: set(ws) for v, ws in und.adjacency.items()}
        self.dirs = dict(dirs)
        self.labels = dict(und.leaf_labels)
        self.segments = {e: (e,) for e in und.edges}

    def delete_leaf(self, leaf: str) -> None:
        (p,) = self.adj.pop(leaf)
        self.adj[p].discard(leaf)
        self.dirs.pop(edge(p, leaf), None)
        self.segments.pop(edge(p, leaf))
        del self.labels[leaf]
        a, b = sorted(self.adj[p])
        d1, d2 = self.dirs.pop(edge(a, p), None), self.dirs.pop(edge(p, b), None)
        if d1 is not None and d2 is not None and (d1[1] == p) == (d2[1] == p):
            # both point into p, or both leave it
            raise _Conflict("inconsistent_suppression")
        merged = None
        for arc in (d1, d2):
            if arc is not None:
                merged = (a, b) if arc in ((a, p), (p, b)) else (b, a)
        del self.adj[p]
        self.adj[a].discard(p)
        self.adj[b].discard(p)
        self.adj[a].add(b)
        self.adj[b].add(a)
        self.segments[edge(a, b)] = self.segments.pop(edge(a, p)) + self.segments.pop(edge(p, b))
        if merged is not None:
            self.dirs[edge(a, b)] = merged

    def network(self) -> PartlyDirectedNetwork:
        arcs = set(self.dirs.values())
        pairs = {edge(u, w) for u, ws in self.adj.items() for w in ws}
        return PartlyDirectedNetwork(frozenset(self.adj), frozenset(pairs - set(self.dirs)), frozenset(arcs),
                                     self.labels)


def _thin(und: UndirectedNetwork, dirs: dict[Edge, Arc]) -> _Thinner:
    thin = _Thinner(und, dirs)
    if und.reticulation_number < 2:
        return thin
    for side in generator(und).sides:
        signs = side_signs(side, dirs)
        if _alternates_twice(signs):
            raise _Conflict("side_alternation")
        protect = protected_positions(signs)
        # protected leaves come on top of the usual allowance
        spare = [c for pos, c in enumerate(side.chain) if c in und.leaf_labels and pos not in protect]
        for c in spare[KEEP_PER_SIDE:]:
            thin.delete_leaf(c)
    return thin


def _blob_class(reduced: PartlyDirectedNetwork):
    def for_blob(blob_net: UndirectedNetwork) -> NetworkClass:
        arcs = {a for a in reduced.arcs if edge(*a) in blob_net.edges}
        ref = PartlyDirectedNetwork(blob_net.vertices, blob_net.edges - {edge(*a) for a in arcs}, frozenset(arcs),
                                    blob_net.leaf_labels)
        return NetworkClass("arc_consistent", reference=ref)
    return for_blob


def partly_directed_c_orientation(pd: PartlyDirectedNetwork, budget=None) -> PartlyDirectedOrientation:
    """A directed network containing every arc of ``pd``, or NO with a reason."""
    und = pd.underlying
    und.check_binary()
    budget = Budget.of(budget)
    if any(u in pd.leaf_labels for u, _ in pd.arcs):
        return _no("arc_out_of_leaf")
    dirs = {edge(*a): tuple(a) for a in pd.arcs}
    try:
        _close(und, dirs)
        thin = _thin(und, dirs)
    except _Conflict as c:
        return _no(c.reason)
    reduced = thin.network()
    rund = reduced.underlying
    cuts = set(blob_decomposition(rund).cut_edges)
    whole = NetworkClass("arc_consistent", reference=reduced)
    plan = plan_blobs(rund, whole, budget, "exhaustive", blob_class=_blob_class(reduced),
                      cut_arcs=[a for a in reduced.arcs if edge(*a) in cuts])
    if plan.failure:
        return _no(plan.failure)
    root = choose_root_edge(plan)
    if root is None:
        return _no("no_root_location")
    small = assemble(plan, root, whole)
    if small is None:
        raise RuntimeError(f"assembly failed on the thinned network at {root}")
    # replay on the full network: deleted leaves hang off tree vertices
    full_root = min(thin.segments[root])
    forced = PartlyDirectedNetwork(pd.vertices, pd.edges - set(dirs), frozenset(dirs.values()), pd.leaf_labels)
    result = orient_partly_directed(forced, full_root, small.reticulations)
    if not result.oriented:
        raise RuntimeError(f"lifting the thinned orientation failed: {result.reason}")
    return PartlyDirectedOrientation(result.network, root_edge=full_root)
