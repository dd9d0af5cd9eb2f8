"""Finding orientations that land in a given network class.

Three searches are provided. The exhaustive one guesses a root edge and a
reticulation set and orients. The chain-reduction one shortens long leaf
chains, searches the small network and maps the answer back by index
arithmetic. The blob one solves each blob separately and glues the pieces
along the cut edges.
"""
from __future__ import annotations

import itertools
import time
from collections import deque
from dataclasses import dataclass, field

from .classes import NetworkClass, class_membership
from .network import DirectedNetwork, Edge, UndirectedNetwork, edge
from .orient import RootedInstance, orient_or_none
from .structure import (
    Generator,
    Side,
    blob_cut_edges,
    blob_decomposition,
    generator,
    induced_blob,
    reduce_pendant_subtrees,
)

# classes in which adjacent reticulations (a stack) are forbidden
_STACK_FREE_TAGS = {"tree_child", "stack_free", "valid", "reticulation_visible"}
FPT_THRESHOLD = 2  # blobs with at most this many reticulations go straight to exhaustive


class BudgetExceeded(RuntimeError):
    pass


class Budget:
    """Wall-clock allowance shared by nested searches."""

    def __init__(self, seconds: float | None = None):
        self.seconds = seconds
        self.deadline = None if seconds is None else time.monotonic() + seconds

    @classmethod
    def of(cls, budget) -> "Budget":
        return budget if isinstance(budget, Budget) else cls(budget)

    def check(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"search exceeded {self.seconds} s")


@dataclass
class RootableSet:
    entries: dict[Edge, DirectedNetwork] = field(default_factory=dict)
    reticulations: dict[Edge, frozenset] = field(default_factory=dict)
    fallbacks: int = 0  # edges the index arithmetic could not settle

    def add(self, e: Edge, net: DirectedNetwork) -> None:
        self.entries[e] = net
        self.reticulations[e] = net.reticulations

    def edges(self) -> list[Edge]:
        return sorted(self.entries)

    def __contains__(self, e) -> bool:
        return edge(*e) in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def _classify(net: DirectedNetwork, cls: NetworkClass) -> bool:
    return class_membership(net, cls)


def _try(net: UndirectedNetwork, e: Edge, retics, cls: NetworkClass) -> DirectedNetwork | None:
    d = orient_or_none(RootedInstance.binary(net, e, retics))
    if d is not None and _classify(d, cls):
        return d
    return None


def _is_forest_without(net: UndirectedNetwork, removed: set) -> bool:
    parent: dict[str, str] = {}

    def find(x):
        while parent.get(x, x) != x:
            parent[x] = parent.get(parent[x], parent[x])
            x = parent[x]
        return x

    for a, b in net.edges:
        if a in removed or b in removed:
            continue
        ra, rb = find(a), find(b)
        if ra == rb:
            return False
        parent[ra] = rb
    return True


def reticulation_candidates(net: UndirectedNetwork, cls: NetworkClass, prune: bool = True):
    """Reticulation sets in lexicographic order. With ``prune`` the sets that
    cannot work are skipped: removing the reticulations of any orientation
    leaves a forest, and stack-free-type classes never have two adjacent
    reticulations."""
    k = net.reticulation_number
    adj = net.adjacency
    for combo in itertools.combinations(net.internal_vertices, k):
        if prune:
            chosen = set(combo)
            if cls.tag in _STACK_FREE_TAGS and any(w in chosen for v in combo for w in adj[v]):
                continue
            if not _is_forest_without(net, chosen):
                continue
        yield combo


def _check_searchable(net: UndirectedNetwork) -> None:
    net.check_binary()
    if net.parallel_pair is not None:
        raise ValueError("class search needs a simple network")


def rootable_edges_exhaustive(net: UndirectedNetwork, cls: NetworkClass, budget=None,
                              edges=None, prune: bool = True) -> RootableSet:
    """Every edge at which ``net`` can be rooted as a member of ``cls``, each
    with the orientation from the lexicographically smallest working
    reticulation set."""
    _check_searchable(net)
    budget = Budget.of(budget)
    candidates = list(reticulation_candidates(net, cls, prune))
    out = RootableSet()
    for e in (net.sorted_edges if edges is None else sorted(edge(*x) for x in edges)):
        for combo in candidates:
            budget.check()
            d = _try(net, e, combo, cls)
            if d is not None:
                out.add(e, d)
                break
    return out


@dataclass(frozen=True)
class SideMap:
    index: int
    side: Side
    kept: int  # the first `kept` leaves of the chain survive

    @property
    def is_long(self) -> bool:
        return self.kept < len(self.side.chain)


@dataclass(frozen=True)
class ChainReduction:
    network: UndirectedNetwork
    generator: Generator
    side_maps: tuple[SideMap, ...]

    def long_sides(self) -> list[SideMap]:
        return [m for m in self.side_maps if m.is_long]


def _has_pendant_subtrees(net: UndirectedNetwork) -> bool:
    return bool(reduce_pendant_subtrees(net)[1])


def chain_reduce(net: UndirectedNetwork, keep: int, keep_per_side: dict[int, int] | None = None) -> ChainReduction:
    """Cut every chain down to its first ``keep`` leaves (u-to-v order).

    A loop side keeps at least two leaves so that no parallel edges appear.
    """
    if _has_pendant_subtrees(net):
        raise ValueError("chain reduction needs a network without non-trivial pendant subtrees")
    gen = generator(net)
    drop: set[str] = set()
    new_edges: set[Edge] = set()
    maps = []
    for i, side in enumerate(gen.sides):
        want = keep if keep_per_side is None else keep_per_side.get(i, keep)
        if side.is_loop:
            want = max(want, 2)
        kept = min(len(side.chain), max(want, 1))
        maps.append(SideMap(i, side, kept))
        if kept == len(side.chain):
            continue
        drop |= set(side.path[kept:]) | set(side.chain[kept:])
        new_edges.add(edge(side.path[kept - 1], side.v))
    if not drop:
        return ChainReduction(net, gen, tuple(maps))
    vertices = frozenset(net.vertices) - drop
    edges = {e for e in net.edges if e[0] in vertices and e[1] in vertices} | new_edges
    labels = {v: lab for v, lab in net.leaf_labels.items() if v in vertices}
    return ChainReduction(UndirectedNetwork(vertices, frozenset(edges), labels), gen, tuple(maps))


def _shifted(retics, side: Side, position) -> frozenset:
    """Move reticulations on ``side``: the vertex at 1-based chain position m
    goes to position ``position(m)``; other reticulations stay."""
    where = {p: m + 1 for m, p in enumerate(side.path)}
    out = set()
    for r in retics:
        m = where.get(r)
        out.add(r if m is None else side.path[position(m) - 1])
    return frozenset(out)


def _map_back(red: ChainReduction, small: RootableSet, full_edges) -> dict[Edge, list[frozenset]]:
    """Candidate (edge, reticulation set) pairs of the full network derived
    from the rootable edges of the reduced one."""
    long_by_attach = {}
    for m in red.long_sides():
        for pos, p in enumerate(m.side.path[:m.kept], start=1):
            long_by_attach[p] = (m, pos)
    long_edges = {e for m in red.long_sides() for e in m.side.edges}
    out: dict[Edge, list[frozenset]] = {}
    for e in small.edges():
        retics = small.reticulations[e]
        a, b = e
        leaf = a if a in red.network.leaf_labels else b if b in red.network.leaf_labels else None
        attach = (b if leaf == a else a) if leaf is not None else None
        if leaf is not None and attach in long_by_attach:
            m, i = long_by_attach[attach]
            side, n, ell = m.side, len(m.side.chain), m.kept
            for j in range(i, n - (ell - i) + 1):
                target = edge(side.path[j - 1], side.chain[j - 1])
                out.setdefault(target, []).append(_shifted(retics, side, lambda q, j=j: q + j - i))
            for j in range(i - 1, n - (ell - i) + 1):
                # subdivide e_j with an extra leaf, root at that leaf, drop it again
                def pos(q, j=j):
                    p = q + j + 1 - i
                    return p if p <= j else p - 1
                out.setdefault(side.edges[j], []).append(_shifted(retics, side, pos))
            continue
        if e in long_edges or e not in full_edges:
            continue
        out.setdefault(e, []).append(retics)
    return out


def rootable_edges_fpt(net: UndirectedNetwork, cls: NetworkClass, budget=None) -> RootableSet:
    """Rootable edges via chain reduction to at most ``cls.l_value`` leaves per side."""
    _check_searchable(net)
    if _has_pendant_subtrees(net):
        raise ValueError("the chain-reduction search needs a network without non-trivial pendant subtrees")
    budget = Budget.of(budget)
    if net.reticulation_number < 2:
        return rootable_edges_exhaustive(net, cls, budget)
    red = chain_reduce(net, cls.l_value)
    small = rootable_edges_exhaustive(red.network, cls, budget)
    if not red.long_sides():
        return small
    out = RootableSet()
    for target, options in sorted(_map_back(red, small, net.edges).items()):
        budget.check()
        for retics in options:
            d = _try(net, target, retics, cls)
            if d is not None:
                out.add(target, d)
                break
        else:
            out.fallbacks += 1
            found = rootable_edges_exhaustive(net, cls, budget, edges=[target])
            if target in found:
                out.add(target, found.entries[target])
    return out


def blob_rootable_set(blob_net: UndirectedNetwork, cls: NetworkClass, budget=None,
                      algorithm: str = "blob") -> RootableSet:
    """Rootable edges of one induced blob network."""
    r = blob_net.reticulation_number
    use_fpt = r >= 2 and (algorithm == "fpt" or (algorithm == "blob" and r > FPT_THRESHOLD))
    if use_fpt:
        return rootable_edges_fpt(blob_net, cls, budget)
    return rootable_edges_exhaustive(blob_net, cls, budget)


@dataclass
class BlobOrientationPlan:
    network: UndirectedNetwork
    blobs: tuple[frozenset, ...]
    rootable: tuple[RootableSet, ...]
    # blob index -> {attach vertex in the blob: pendant edge of its induced network}
    pendants: tuple[dict[str, Edge], ...]
    # cut edge -> the arcs forced on it; two arcs mean it is bidirected
    overlay: dict[Edge, tuple[tuple[str, str], ...]]
    # vertex -> id of its vertex of the contracted tree, and the arcs between those
    component: dict[str, int] = field(default_factory=dict)
    t_c_arcs: tuple[tuple[int, int], ...] = ()
    root_component: int | None = None
    failure: str | None = None

    def rootable_at(self, b: int, attach: str) -> bool:
        return self.pendants[b][attach] in self.rootable[b]


def _components(net: UndirectedNetwork, joined: list[Edge]) -> dict[str, int]:
    parent = {v: v for v in net.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in joined:
        parent[find(a)] = find(b)
    ids: dict[str, int] = {}
    out = {}
    for v in sorted(net.vertices):
        out[v] = ids.setdefault(find(v), len(ids))
    return out


def plan_blobs(net: UndirectedNetwork, cls: NetworkClass, budget=None, algorithm: str = "blob",
               blob_class=None, cut_arcs=()) -> BlobOrientationPlan:
    """Per-blob rootable sets, cut-edge directions and the contracted tree.

    ``blob_class`` optionally maps an induced blob network to the class used
    for it; ``cut_arcs`` are directions already fixed on cut edges.
    """
    _check_searchable(net)
    budget = Budget.of(budget)
    dec = blob_decomposition(net)
    rootable, pendants = [], []
    overlay: dict[Edge, set] = {e: set() for e in dec.cut_edges}
    for a in cut_arcs:
        overlay[edge(*a)].add(tuple(a))
    for blob in dec.blobs:
        blob_net, attach = induced_blob(net, blob)
        blob_cls = cls if blob_class is None else blob_class(blob_net)
        rootable.append(blob_rootable_set(blob_net, blob_cls, budget, algorithm))
        pendants.append({v: edge(leaf, v) for leaf, v in attach.items()})
    plan = BlobOrientationPlan(net, dec.blobs, tuple(rootable), tuple(pendants), {})
    for b, blob in enumerate(dec.blobs):
        if not rootable[b]:
            plan.failure = "blob_not_rootable"
        for v, cut in blob_cut_edges(net, blob).items():
            if not plan.rootable_at(b, v):
                w = cut[1] if cut[0] == v else cut[0]
                overlay[cut].add((v, w))
    plan.overlay = {e: tuple(sorted(arcs)) for e, arcs in overlay.items() if arcs}
    if plan.failure:
        return plan
    if any(len(a) > 1 for a in plan.overlay.values()):
        plan.failure = "bidirected_cut_edge"
        return plan
    joined = [e for b in dec.blobs for e in net.edges if e[0] in b and e[1] in b]
    joined += [e for e in dec.cut_edges if e not in plan.overlay]
    comp = _components(net, joined)
    arcs = tuple(sorted((comp[t], comp[h]) for ((t, h),) in plan.overlay.values()))
    plan.component, plan.t_c_arcs = comp, arcs
    indeg: dict[int, int] = {}
    for _, h in arcs:
        indeg[h] = indeg.get(h, 0) + 1
    if any(d >= 2 for d in indeg.values()):
        plan.failure = "not_rooted_tree"
        return plan
    roots = sorted(set(comp.values()) - set(indeg))
    plan.root_component = roots[0]
    return plan


def _entry_vertices(net: UndirectedNetwork, blobs, root_edge: Edge) -> dict[int, str]:
    """For each blob not containing ``root_edge``, the vertex where a walk from the root first enters it."""
    where = {v: i for i, b in enumerate(blobs) for v in b}
    seen = set(root_edge)
    queue = deque(root_edge)
    entry: dict[int, str] = {}
    for v in root_edge:
        if v in where and not set(root_edge) <= blobs[where[v]]:
            entry[where[v]] = v
    while queue:
        u = queue.popleft()
        for w in net.adjacency[u]:
            if w in seen:
                continue
            seen.add(w)
            queue.append(w)
            b = where.get(w)
            if b is not None and b not in entry and not set(root_edge) <= blobs[b]:
                entry[b] = w
    return entry


def assemble(plan: BlobOrientationPlan, root_edge: Edge, cls: NetworkClass) -> DirectedNetwork | None:
    """Glue the stored blob orientations into an orientation of the whole
    network rooted at ``root_edge``, or None if some blob cannot be entered
    where the root forces it."""
    net = plan.network
    root_edge = edge(*root_edge)
    retics: set[str] = set()
    entry = _entry_vertices(net, plan.blobs, root_edge)
    for b, blob in enumerate(plan.blobs):
        if set(root_edge) <= blob:
            key = root_edge
        else:
            key = plan.pendants[b][entry[b]]
        if key not in plan.rootable[b]:
            return None
        retics |= plan.rootable[b].reticulations[key]
    d = orient_or_none(RootedInstance.binary(net, root_edge, retics))
    if d is None or not _classify(d, cls):
        return None
    return d


def choose_root_edge(plan: BlobOrientationPlan) -> Edge | None:
    """Smallest free cut edge of the root region, else the smallest rootable
    edge inside its blob. None only when fixed cut arcs leave no room."""
    net, comp = plan.network, plan.component
    k = plan.root_component
    cuts = [e for e in blob_decomposition(net).cut_edges if e not in plan.overlay and comp[e[0]] == k]
    if cuts:
        return cuts[0]
    blobs = [i for i, blob in enumerate(plan.blobs) if comp[next(iter(blob))] == k]
    if not blobs:
        return None
    (b,) = blobs
    internal = [e for e in plan.rootable[b].edges() if e[0] in plan.blobs[b] and e[1] in plan.blobs[b]]
    return internal[0] if internal else None


@dataclass(frozen=True)
class ClassOrientation:
    network: DirectedNetwork | None
    reason: str | None = None
    root_edge: Edge | None = None
    plan: BlobOrientationPlan | None = None

    @property
    def found(self) -> bool:
        return self.network is not None


def c_orientation(net: UndirectedNetwork, cls: NetworkClass, budget=None, algorithm: str = "blob") -> ClassOrientation:
    """An orientation of ``net`` in ``cls``, or NO with a reason."""
    _check_searchable(net)
    if algorithm not in ("blob", "fpt", "exhaustive"):
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if algorithm == "exhaustive":
        found = rootable_edges_exhaustive(net, cls, budget)
        if not found:
            return ClassOrientation(None, "no_rootable_edge")
        e = found.edges()[0]
        return ClassOrientation(found.entries[e], root_edge=e)
    plan = plan_blobs(net, cls, budget, algorithm)
    if plan.failure:
        return ClassOrientation(None, plan.failure, plan=plan)
    root = choose_root_edge(plan)
    d = None if root is None else assemble(plan, root, cls)
    if d is None:
        raise RuntimeError(f"blob assembly failed at {root} although the contracted tree is rooted")
    return ClassOrientation(d, root_edge=root, plan=plan)


def rootable_edges(net: UndirectedNetwork, cls: NetworkClass, budget=None, algorithm: str = "blob",
                   edges=None) -> RootableSet:
    """Every edge of ``net`` at which it can be rooted in ``cls``, computed
    blob by blob (or by brute search with ``algorithm='exhaustive'``)."""
    if algorithm == "exhaustive":
        return rootable_edges_exhaustive(net, cls, budget, edges=edges)
    budget = Budget.of(budget)
    plan = plan_blobs(net, cls, budget, algorithm)
    out = RootableSet()
    if plan.failure == "blob_not_rootable":
        return out
    for e in (net.sorted_edges if edges is None else sorted(edge(*x) for x in edges)):
        budget.check()
        d = assemble(plan, e, cls)
        if d is not None:
            out.add(e, d)
    return out


def is_tree_based_undirected(net: UndirectedNetwork, budget=None) -> bool:
    """Whether ``net`` is tree-based as an undirected network, decided by
    looking for a cut edge at which it can be rooted as a tree-based network."""
    net.check_binary()
    cuts = blob_decomposition(net).cut_edges
    if not cuts:
        return False
    return bool(rootable_edges(net, NetworkClass("tree_based"), budget, edges=cuts))
