"""Membership tests for classes of binary directed networks.

Forbidden structures: a *stack* is a reticulation with a reticulation child, a
*W-shape* a non-reticulation with two reticulation children, a *camel* a
W-shape whose tree vertex shares a parent with one of those children, and a
*W-fence* a zig-zag of reticulation arcs starting and ending at reticulations.
"""
from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .network import Arc, DirectedNetwork, NetworkError, PartlyDirectedNetwork

CLASS_TAGS = ("tree_child", "stack_free", "tree_based", "valid", "reticulation_visible", "orchard", "any",
              "arc_consistent")
NAMED_CLASSES = ("tree_child", "stack_free", "tree_based", "valid", "reticulation_visible", "orchard")

_L_VALUES = {"tree_child": 3, "stack_free": 3, "tree_based": 2, "valid": 3, "reticulation_visible": 3,
             "orchard": 3, "any": 3, "arc_consistent": 2}
_COMPLEXITY = {"tree_child": "O(n)", "stack_free": "O(n)", "tree_based": "O(2^k n)", "valid": "O(n)",
               "reticulation_visible": "O(k n)", "orchard": "O(n log n)", "any": "O(1)",
               "arc_consistent": "O(n)"}


@dataclass(frozen=True)
class NetworkClass:
    tag: str
    reference: PartlyDirectedNetwork | None = None

    def __post_init__(self):
        if self.tag not in CLASS_TAGS:
            raise ValueError(f"unknown network class {self.tag!r}")
        if self.tag == "arc_consistent" and self.reference is None:
            raise ValueError("arc_consistent needs a reference partly-directed network")

    @property
    def l_value(self) -> int:
        return _L_VALUES[self.tag]

    @property
    def f_complexity(self) -> str:
        return _COMPLEXITY[self.tag]

    @classmethod
    def named(cls, name: str) -> "NetworkClass":
        return cls(name.replace("-", "_"))


def stacks(net: DirectedNetwork) -> list[Arc]:
    retics = net.reticulations
    return sorted((u, v) for u, v in net.arcs if u in retics and v in retics)


def w_shapes(net: DirectedNetwork) -> list[tuple[str, str, str]]:
    retics = net.reticulations
    out = []
    for v in sorted(net.vertices):
        if v in retics:
            continue
        kids = [c for c in net.children[v] if c in retics]
        if len(kids) >= 2:
            out += [(v, a, b) for a, b in itertools.combinations(kids, 2)]
    return out


def camels(net: DirectedNetwork) -> list[tuple[str, str, str]]:
    out = []
    for v, a, b in w_shapes(net):
        above = set(net.parents[v])
        if above & set(net.parents[a]) or above & set(net.parents[b]):
            out.append((v, a, b))
    return out


def is_tree_child(net: DirectedNetwork) -> bool:
    net.check_binary()
    return not stacks(net) and not w_shapes(net)


def is_stack_free(net: DirectedNetwork) -> bool:
    net.check_binary()
    return not stacks(net)


def is_valid(net: DirectedNetwork) -> bool:
    net.check_binary()
    return not stacks(net) and not camels(net)


def base_tree_candidates(net: DirectedNetwork) -> Iterator[frozenset]:
    """Spanning arborescences keeping one incoming arc per reticulation."""
    retics = sorted(net.reticulations)
    fixed = frozenset(a for a in net.arcs if a[1] not in net.reticulations)
    for choice in itertools.product(*(net.parents[r] for r in retics)):
        yield fixed | {(p, r) for p, r in zip(choice, retics)}


def find_base_tree(net: DirectedNetwork) -> frozenset | None:
    net.check_binary()
    for arcs in base_tree_candidates(net):
        tails = {u for u, _ in arcs}
        sinks = {v for v in net.vertices if v not in tails}
        if sinks == net.leaves:
            return arcs
    return None


def is_tree_based(net: DirectedNetwork) -> bool:
    return find_base_tree(net) is not None


def find_w_fence(net: DirectedNetwork) -> tuple[str, ...] | None:
    """Linear scan: reticulation arcs, with each vertex split into a parent
    copy and a child copy, form disjoint paths and cycles; a fence is a path
    whose two ends are parent copies of reticulations."""
    net.check_binary()
    retics = net.reticulations
    adj: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for u, v in net.arcs:
        if v in retics:
            adj.setdefault(("p", u), []).append(("c", v))
            adj.setdefault(("c", v), []).append(("p", u))
    seen = set()
    for start in sorted(adj):
        if start in seen or start[0] != "p" or len(adj[start]) != 1:
            continue
        walk = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [w for w in adj[cur] if w != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            walk.append(cur)
            seen.add(cur)
        if walk[0][1] in retics and walk[-1][1] in retics and walk[-1][0] == "p":
            return tuple(x for _, x in walk)
    return None


def invisible_reticulations(net: DirectedNetwork) -> list[str]:
    """Reticulations avoidable on the way from the root to every leaf."""
    net.check_binary()
    out = []
    for r in sorted(net.reticulations):
        seen = {net.root}
        queue = deque([net.root])
        while queue:
            u = queue.popleft()
            for w in net.children[u]:
                if w != r and w not in seen:
                    seen.add(w)
                    queue.append(w)
        if net.leaves <= seen:
            out.append(r)
    return out


def is_reticulation_visible(net: DirectedNetwork) -> bool:
    return not invisible_reticulations(net)


@dataclass(frozen=True)
class Pick:
    kind: str  # "cherry" or "reticulated_cherry"
    first: str  # kept leaf, or the leaf below the reticulation
    second: str  # removed leaf, or the leaf below the tree vertex

    def key(self):
        return (self.first, self.second, self.kind)


@dataclass(frozen=True)
class PickSequence:
    moves: tuple[Pick, ...]
    stalled: tuple[Arc, ...] = ()  # arcs left when no pick was possible


class _Reducer:
    """Mutable copy of a network on which cherries can be picked."""

    def __init__(self, net: DirectedNetwork):
        self.children = {v: set(c) for v, c in net.children.items()}
        self.parents = {v: set(p) for v, p in net.parents.items()}
        self.root = net.root
        self.label = dict(net.leaf_labels)
        self.vertex = {lab: v for v, lab in self.label.items()}

    def is_leaf(self, v):
        return v in self.label

    def is_retic(self, v):
        return len(self.parents[v]) >= 2

    def single_cherry(self) -> bool:
        kids = self.children[self.root]
        return len(self.children) == 3 and len(kids) == 2 and all(self.is_leaf(k) for k in kids)

    def moves_at(self, x: str) -> list[Pick]:
        if x not in self.label:
            return []
        out = []
        (p,) = self.parents[x]
        if not self.is_retic(p):
            for y in self.children[p]:
                if y != x and self.is_leaf(y):
                    a, b = sorted((self.label[x], self.label[y]))
                    out.append(Pick("cherry", a, b))
        else:
            for q in self.parents[p]:
                if self.is_retic(q) or q == self.root:
                    continue
                for y in self.children[q]:
                    if y != p and self.is_leaf(y):
                        out.append(Pick("reticulated_cherry", self.label[x], self.label[y]))
        # x may also be the tree-side leaf of a reticulated cherry
        if not self.is_retic(p) and p != self.root:
            for r in self.children[p]:
                if r != x and self.is_retic(r):
                    for z in self.children[r]:
                        if self.is_leaf(z):
                            out.append(Pick("reticulated_cherry", self.label[z], self.label[x]))
        return out

    def legal(self, move: Pick) -> bool:
        x, y = self.vertex.get(move.first), self.vertex.get(move.second)
        if x is None or y is None:
            return False
        return move in self.moves_at(x)

    def _arc(self, u, v):
        if v in self.children[u]:
            raise NetworkError("simple", u, f"picking creates parallel arcs {u}->{v}")
        self.children[u].add(v)
        self.parents[v].add(u)

    def _del_arc(self, u, v):
        self.children[u].discard(v)
        self.parents[v].discard(u)

    def _suppress(self, v) -> str:
        (g,) = self.parents[v]
        (c,) = self.children[v]
        self._del_arc(g, v)
        self._del_arc(v, c)
        del self.children[v], self.parents[v]
        self._arc(g, c)
        return g

    def apply(self, move: Pick) -> set[str]:
        x, y = self.vertex[move.first], self.vertex[move.second]
        if move.kind == "cherry":
            (p,) = self.parents[y]
            self._del_arc(p, y)
            del self.children[y], self.parents[y]
            del self.vertex[self.label.pop(y)]
            g = self._suppress(p)
            return {x, g}
        (px,) = self.parents[x]
        (py,) = self.parents[y]
        self._del_arc(py, px)
        g = self._suppress(py)
        q = self._suppress(px)
        return {x, y, g, q}

    def nearby_leaves(self, touched: set[str]) -> set[str]:
        out = set()
        for v in touched:
            if v not in self.children:
                continue
            out.add(v)
            for c in self.children[v]:
                out.add(c)
                out |= self.children.get(c, set())
        return {v for v in out if self.is_leaf(v)}


def is_orchard(net: DirectedNetwork) -> tuple[bool, PickSequence]:
    """Greedy cherry picking, always taking the smallest available move.

    On failure the sequence holds the picks made before the reduction stalled
    and the arcs of the stalled network.
    """
    net.check_binary()
    red = _Reducer(net)
    heap = [(m.key(), m) for x in sorted(red.label) for m in red.moves_at(x)]
    heapq.heapify(heap)
    done: list[Pick] = []
    while not red.single_cherry():
        move = None
        while heap:
            _, cand = heapq.heappop(heap)
            if red.legal(cand):
                move = cand
                break
        if move is None:
            left = tuple(sorted((u, v) for u, cs in red.children.items() for v in cs))
            return False, PickSequence(tuple(done), left)
        done.append(move)
        touched = red.apply(move)
        for x in sorted(red.nearby_leaves(touched)):
            for m in red.moves_at(x):
                heapq.heappush(heap, (m.key(), m))
    return True, PickSequence(tuple(done))


def replay_picks(net: DirectedNetwork, seq: PickSequence) -> bool:
    """Check that ``seq`` is legal on ``net`` and ends at a single cherry."""
    red = _Reducer(net)
    for move in seq.moves:
        if not red.legal(move):
            return False
        red.apply(move)
    return red.single_cherry()


def is_orchard_exhaustive(net: DirectedNetwork) -> bool:
    """Try every pick order (both removal choices for cherries). Testing oracle."""
    net.check_binary()
    seen: set = set()

    def state_key(red: _Reducer):
        return frozenset((u, v) for u, cs in red.children.items() for v in cs)

    def search(red: _Reducer) -> bool:
        if red.single_cherry():
            return True
        key = state_key(red)
        if key in seen:
            return False
        seen.add(key)
        moves = set()
        for x in red.label:
            for m in red.moves_at(x):
                moves.add(m)
                if m.kind == "cherry":
                    moves.add(Pick("cherry", m.second, m.first))
        for m in sorted(moves, key=Pick.key):
            child = _Reducer.__new__(_Reducer)
            child.children = {v: set(c) for v, c in red.children.items()}
            child.parents = {v: set(p) for v, p in red.parents.items()}
            child.root, child.label, child.vertex = red.root, dict(red.label), dict(red.vertex)
            try:
                child.apply(m)
            except NetworkError:
                continue
            if search(child):
                return True
        return False

    return search(_Reducer(net))


def class_membership(net: DirectedNetwork, cls: NetworkClass) -> bool:
    tag = cls.tag
    if tag == "any":
        return True
    if tag == "arc_consistent":
        return all(a in net.arcs for a in cls.reference.arcs)
    checker = {
        "tree_child": is_tree_child,
        "stack_free": is_stack_free,
        "tree_based": is_tree_based,
        "valid": is_valid,
        "reticulation_visible": is_reticulation_visible,
        "orchard": lambda d: is_orchard(d)[0],
    }.get(tag)
    if checker is None:
        raise ValueError(f"unknown network class {tag!r}")
    return checker(net)
