"""Orienting an undirected network for a given root edge and desired indegrees.

The propagation visits every edge once, so a call costs O(|E|). When it stalls,
the stalled state is turned into a degree cut that certifies non-orientability.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .network import (
    ROOT_ID,
    DegreeMap,
    DirectedNetwork,
    Edge,
    NetworkError,
    PartlyDirectedNetwork,
    UndirectedNetwork,
    edge,
)

CUT_UNEXTRACTED = "cut_unextracted"
EXHAUSTIVE_CUT_LIMIT = 20


@dataclass(frozen=True)
class RootedInstance:
    network: UndirectedNetwork
    root_edge: Edge
    degrees: DegreeMap

    def __post_init__(self):
        object.__setattr__(self, "root_edge", edge(*self.root_edge))
        net = self.network
        if self.root_edge not in net.edges:
            raise NetworkError("root-edge-in-network", self.root_edge[0], f"{self.root_edge} is not an edge")
        if net.parallel_pair is not None and self.root_edge != net.parallel_pair:
            raise NetworkError("root-on-parallel-pair", net.parallel_pair[0],
                               "the root has to subdivide one copy of the parallel pair")
        if ROOT_ID in net.vertices:
            raise NetworkError("reserved-root-id", ROOT_ID)
        self.degrees.validate_for(net)

    @classmethod
    def binary(cls, net: UndirectedNetwork, root_edge: Edge, retics: Iterable[str]) -> "RootedInstance":
        return cls(net, root_edge, DegreeMap.from_reticulations(retics))

    def rooted_edges(self) -> list[Edge]:
        """Edges of the network with the root edge subdivided by the root."""
        a, b = self.root_edge
        out = [e for e in self.network.edge_order if e != self.root_edge]
        if self.network.parallel_pair is not None:
            out.append(self.root_edge)  # the other copy stays
        out += [edge(ROOT_ID, a), edge(ROOT_ID, b)]
        return out

    def sum_matches(self) -> bool:
        return self.degrees.total(self.network) == self.network.edge_count + 1


@dataclass(frozen=True)
class DegreeCut:
    v_prime: frozenset
    e_prime: frozenset
    kind: str = "degree"  # "reticulation" when produced for a binary instance


@dataclass(frozen=True)
class OrientationResult:
    outcome: str  # "oriented" | "not_orientable"
    network: DirectedNetwork | None = None
    reason: str | None = None  # sum_mismatch | degree_cut | cut_unextracted | arc_conflict
    cut: DegreeCut | None = None

    @property
    def oriented(self) -> bool:
        return self.outcome == "oriented"


def _not_orientable(reason: str, cut: DegreeCut | None = None) -> OrientationResult:
    return OrientationResult("not_orientable", reason=reason, cut=cut)


class _State:
    """Outcome of propagation on integer ids; names are looked up on demand."""

    def __init__(self, edges: list[Edge], names: list[str], tails: list[int], done: list[bool]):
        self.edges = edges
        self.names = names
        self._tails = tails  # id of the tail of each edge, -1 while undirected
        self._done = done

    @property
    def complete(self) -> bool:
        return -1 not in self._tails

    @property
    def tails(self) -> list[str | None]:
        names = self.names
        return [None if t < 0 else names[t] for t in self._tails]

    @property
    def processed(self) -> set[str]:
        names = self.names
        return {names[v] for v, d in enumerate(self._done) if d}


def _propagate(inst: RootedInstance, order: str = "fifo") -> _State:
    # integer ids keep the hot loop on flat lists
    edges = inst.rooted_edges()
    # ids follow first appearance in the edge list, which keeps neighbours
    # close in memory; the order never affects the traversal
    index = {ROOT_ID: 0}
    setdefault = index.setdefault
    ends = [(setdefault(a, len(index)), setdefault(b, len(index))) for a, b in edges]
    names = list(index)
    incident: list[list[int]] = [[] for _ in names]
    for i, (a, b) in enumerate(ends):
        incident[a].append(i)
        incident[b].append(i)
    wanted = inst.degrees.desired_indegree.get
    need = [wanted(v, 1) for v in names]
    root = 0
    need[root] = 0
    indeg = [0] * len(names)
    tails = [-1] * len(edges)
    done = [False] * len(names)
    ready = deque([root])
    pop = ready.popleft if order == "fifo" else ready.pop
    while ready:
        v = pop()
        if done[v] or indeg[v] != need[v]:
            continue
        done[v] = True
        for i in incident[v]:
            if tails[i] < 0:
                tails[i] = v
                a, b = ends[i]
                w = b if a == v else a
                indeg[w] += 1
                if indeg[w] == need[w]:
                    ready.append(w)
    return _State(edges, names, tails, done)


def _as_directed(inst: RootedInstance, state: _State) -> DirectedNetwork:
    index_of_tail = state._tails
    names = state.names
    arcs = [(a, b) if names[t] == a else (b, a) for (a, b), t in zip(state.edges, index_of_tail)]
    # every vertex was entered exactly as often as requested, and in
    # topological order, so the result needs no re-validation
    return DirectedNetwork.trusted(inst.network.vertices | {ROOT_ID}, frozenset(arcs),
                                   inst.network.leaf_labels, ROOT_ID)


def validate_degree_cut(inst: RootedInstance, cut: DegreeCut) -> list[str]:
    """Names of the degree-cut conditions that ``cut`` violates (empty if valid)."""
    problems = []
    rooted = inst.rooted_edges()
    rooted_set = set(rooted)
    e_prime = {edge(*e) for e in cut.e_prime}
    v_prime = set(cut.v_prime)
    if not e_prime <= rooted_set:
        problems.append("edges-of-rooted-network")
    if not v_prime <= set(inst.network.vertices):
        problems.append("vertices-of-network")
    if problems:
        return problems
    adj: dict[str, list[str]] = {v: [] for v in inst.network.vertices}
    adj[ROOT_ID] = []
    for a, b in rooted:
        if (a, b) in e_prime:
            continue
        adj[a].append(b)
        adj[b].append(a)
    comp: dict[str, int] = {}
    for s in adj:
        if s in comp:
            continue
        comp[s] = s_id = len(comp)
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp[w] = s_id
                    stack.append(w)
    if len(set(comp.values())) < 2 or not e_prime:
        problems.append("edge-cut")
    if any(comp[v] == comp[ROOT_ID] for v in v_prime):
        problems.append("root-separated")
    if any(sum(1 for x in e if x in v_prime) != 1 for e in e_prime):
        problems.append("one-endpoint-in-v-prime")
    for v in v_prime:
        hits = sum(1 for e in e_prime if v in e)
        if hits >= inst.degrees[v]:
            problems.append("fewer-than-desired-indegree")
            break
    return problems


def _extract_from_state(state: _State) -> DegreeCut:
    e_prime, v_prime = set(), set()
    for (a, b), t in zip(state.edges, state.tails):
        if t is None:
            continue
        head = b if t == a else a
        if head not in state.processed:
            e_prime.add(edge(a, b))
            v_prime.add(head)
    return DegreeCut(frozenset(v_prime), frozenset(e_prime))


def _exhaustive_cut(inst: RootedInstance) -> DegreeCut | None:
    """Search vertex sets W avoiding the root in which every vertex has fewer
    boundary edges than its desired indegree; the boundary of such a W is a
    degree cut, and every degree cut arises this way."""
    rooted = inst.rooted_edges()
    nbrs: dict[str, list[str]] = {v: [] for v in inst.network.vertices}
    nbrs[ROOT_ID] = []
    for a, b in rooted:
        nbrs[a].append(b)
        nbrs[b].append(a)
    verts = sorted(inst.network.vertices)
    for size in range(1, len(verts) + 1):
        for combo in itertools.combinations(verts, size):
            inside = set(combo)
            ok = True
            for v in combo:
                if sum(1 for w in nbrs[v] if w not in inside) >= inst.degrees[v]:
                    ok = False
                    break
            if not ok:
                continue
            boundary = {edge(v, w) for v in combo for w in nbrs[v] if w not in inside}
            v_prime = {v for v in combo if any(w not in inside for w in nbrs[v])}
            return DegreeCut(frozenset(v_prime), frozenset(boundary))
    return None


def _certificate(inst: RootedInstance, state: _State) -> DegreeCut | str:
    cut = _extract_from_state(state)
    if not validate_degree_cut(inst, cut):
        return cut
    if len(inst.network.vertices) <= EXHAUSTIVE_CUT_LIMIT:
        found = _exhaustive_cut(inst)
        if found is not None:
            return found
    return CUT_UNEXTRACTED


def orient(inst: RootedInstance, order: str = "fifo") -> OrientationResult:
    """Unique orientation with the root on ``inst.root_edge`` and the desired
    indegrees, or a certificate that none exists."""
    if not inst.sum_matches():
        return _not_orientable("sum_mismatch")
    state = _propagate(inst, order)
    if state.complete:
        return OrientationResult("oriented", network=_as_directed(inst, state))
    cert = _certificate(inst, state)
    if isinstance(cert, DegreeCut):
        return _not_orientable("degree_cut", cert)
    return _not_orientable(CUT_UNEXTRACTED)


def orient_or_none(inst: RootedInstance) -> DirectedNetwork | None:
    """Like ``orient`` but skips certificate extraction; meant for search loops."""
    if not inst.sum_matches():
        return None
    state = _propagate(inst)
    return _as_directed(inst, state) if state.complete else None


def find_degree_cut(inst: RootedInstance) -> DegreeCut | str | None:
    """None if the instance is orientable, otherwise a validated degree cut
    (or ``CUT_UNEXTRACTED`` if none could be produced)."""
    if not inst.sum_matches():
        raise ValueError("desired indegrees must sum to |E| + 1")
    state = _propagate(inst)
    if state.complete:
        return None
    return _certificate(inst, state)


def _binary_instance(net: UndirectedNetwork, root_edge: Edge, retics: Iterable[str]) -> RootedInstance:
    net.check_binary()
    retics = set(retics)
    for r in sorted(retics):
        if r in net.leaf_labels:
            raise NetworkError("reticulations-internal", r, "a leaf cannot be a reticulation")
    return RootedInstance.binary(net, root_edge, retics)


def orient_binary(net: UndirectedNetwork, root_edge: Edge, retics: Iterable[str]) -> OrientationResult:
    inst = _binary_instance(net, root_edge, retics)
    result = orient(inst)
    if result.cut is not None:
        result = replace(result, cut=replace(result.cut, kind="reticulation"))
    return result


def check_stack_free_rooted(net: UndirectedNetwork, root_edge: Edge, retics: Iterable[str]) -> bool:
    """Whether rooting at ``root_edge`` with reticulations ``retics`` yields a
    stack-free network."""
    retics = set(retics)
    inst = _binary_instance(net, root_edge, retics)
    if not inst.sum_matches():
        raise ValueError(f"need {net.reticulation_number} reticulations, got {len(retics)}")
    if any(u in retics and v in retics for u, v in net.edges):
        return False
    return find_degree_cut(inst) is None


def orient_partly_directed(pd: PartlyDirectedNetwork, root_edge: Edge, retics: Iterable[str]) -> OrientationResult:
    root_edge = edge(*root_edge)
    result = orient_binary(pd.underlying, root_edge, retics)
    if not result.oriented:
        return result
    if any(edge(*a) == root_edge for a in pd.arcs):
        return _not_orientable("arc_conflict")
    arcs = result.network.arcs
    if all(a in arcs for a in pd.arcs):
        return result
    return _not_orientable("arc_conflict")


def is_semi_directed(pd: PartlyDirectedNetwork) -> tuple[bool, tuple[Edge, DirectedNetwork] | None]:
    """Whether ``pd`` arises from a binary directed network by forgetting the
    direction of every non-reticulation arc and suppressing the root."""
    pd.underlying.check_binary()
    retics = pd.arc_reticulations
    if any(v not in retics for _, v in pd.arcs):
        return False, None
    for e in sorted(pd.edges):
        result = orient_partly_directed(pd, e, retics)
        if result.oriented:
            return True, (e, result.network)
    return False, None


BRUTE_FORCE_LIMIT = 20


def brute_force_orientations(net: UndirectedNetwork, root_edge: Edge, degrees: DegreeMap | Mapping[str, int]) -> list[DirectedNetwork]:
    """Every orientation with the given root edge and indegrees, found by
    trying all direction vectors. Testing oracle."""
    if net.edge_count > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} edges")
    if not isinstance(degrees, DegreeMap):
        degrees = DegreeMap(dict(degrees))
    a, b = edge(*root_edge)
    free = [e for e in net.sorted_edges if e != (a, b)]
    if net.parallel_pair is not None:
        free.append(net.parallel_pair)
    fixed = [(ROOT_ID, a), (ROOT_ID, b)]
    want = {v: degrees[v] for v in net.vertices}
    found = []
    for bits in itertools.product((0, 1), repeat=len(free)):
        arcs = list(fixed)
        indeg = dict.fromkeys(net.vertices, 0)
        indeg[a] += 1
        indeg[b] += 1
        for (u, v), flip in zip(free, bits):
            head = u if flip else v
            arcs.append((v, u) if flip else (u, v))
            indeg[head] += 1
        if indeg != want:
            continue
        try:
            found.append(DirectedNetwork(frozenset(net.vertices) | {ROOT_ID}, frozenset(arcs),
                                         net.leaf_labels, ROOT_ID))
        except NetworkError:
            continue
    return found
