"""Network data model: undirected, directed and partly-directed binary networks.

All network objects validate themselves on construction and are immutable
afterwards. Vertex ids and leaf labels are plain strings.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

Edge = tuple[str, str]
Arc = tuple[str, str]

FRESH_PREFIX = "_g"
ROOT_ID = "_rho"


def edge(u: str, v: str) -> Edge:
    """Normalize an unordered pair so that the smaller id comes first."""
    return (u, v) if u <= v else (v, u)


def fresh_ids(taken: Iterable[str], count: int, prefix: str = FRESH_PREFIX) -> list[str]:
    taken = set(taken)
    out = []
    i = 0
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in taken:
            out.append(name)
        i += 1
    return out


class NetworkError(ValueError):
    """A network invariant does not hold."""

    def __init__(self, invariant: str, vertex: str | None = None, detail: str = ""):
        self.invariant = invariant
        self.vertex = vertex
        msg = f"invariant '{invariant}' violated"
        if vertex is not None:
            msg += f" at vertex '{vertex}'"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class ParseError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"Line {line}: {message}")


def _check_labels(vertices, degree, leaf_labels) -> None:
    for v in leaf_labels:
        if v not in vertices:
            raise NetworkError("labels-on-vertices", v, "label attached to unknown vertex")
    seen: dict[str, str] = {}
    for v, lab in leaf_labels.items():
        if lab in seen:
            raise NetworkError("unique-labels", v, f"label {lab!r} also used by {seen[lab]!r}")
        seen[lab] = v


def _connected(vertices, adjacency) -> str | None:
    """Return a vertex unreachable from the smallest vertex, or None."""
    if not vertices:
        return None
    start = min(vertices)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adjacency[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) == len(vertices):
        return None
    return min(set(vertices) - seen)


@dataclass(frozen=True, eq=True)
class UndirectedNetwork:
    """Simple connected graph without degree-2 vertices whose degree-1
    vertices are exactly the labeled leaves.

    ``parallel_pair`` is only set on networks produced by suppressing the root
    of a directed network whose two children were adjacent: the pair then
    carries a second, implicit copy of that edge which must host the root.
    """

    vertices: frozenset
    edges: frozenset
    leaf_labels: Mapping[str, str] = field(default_factory=dict, hash=False)
    parallel_pair: Edge | None = None
    # order the edges were given in; not part of the network's identity
    input_order: tuple[Edge, ...] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(edge(*e) for e in self.edges))
        if self.input_order is not None:
            order = tuple(dict.fromkeys(edge(*e) for e in self.input_order))
            if len(order) != len(self.edges) or not self.edges.issuperset(order):
                raise ValueError("input_order must list exactly the network's edges")
            object.__setattr__(self, "input_order", order)
        object.__setattr__(self, "leaf_labels", dict(self.leaf_labels))
        if self.parallel_pair is not None:
            object.__setattr__(self, "parallel_pair", edge(*self.parallel_pair))
        self._validate()

    def __hash__(self):
        return hash((self.vertices, self.edges, self.parallel_pair))

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]], leaf_labels: Mapping[str, str] | None = None,
                   parallel_pair: Edge | None = None) -> "UndirectedNetwork":
        edges = [edge(u, v) for u, v in edges]
        vertices = {x for e in edges for x in e}
        if leaf_labels is None:
            deg: dict[str, int] = {}
            for u, v in edges:
                deg[u] = deg.get(u, 0) + 1
                deg[v] = deg.get(v, 0) + 1
            leaf_labels = {v: v for v, d in deg.items() if d == 1}
        return cls(frozenset(vertices), frozenset(edges), leaf_labels, parallel_pair, tuple(edges))

    def _validate(self) -> None:
        if not self.edges:
            raise NetworkError("nonempty", None, "network has no edges")
        for u, v in self.edges:
            if u == v:
                raise NetworkError("simple", u, "loop edge")
            if u not in self.vertices or v not in self.vertices:
                raise NetworkError("edges-on-vertices", u if u not in self.vertices else v)
        if self.parallel_pair is not None and self.parallel_pair not in self.edges:
            raise NetworkError("parallel-pair-is-edge", self.parallel_pair[0])
        deg = self.degrees
        for v in sorted(self.vertices):
            d = deg[v]
            if d == 0:
                raise NetworkError("connected", v, "isolated vertex")
            if d == 2:
                raise NetworkError("no-degree-2", v)
            if d == 1 and v not in self.leaf_labels:
                raise NetworkError("leaves-labeled", v, "degree-1 vertex without label")
            if d != 1 and v in self.leaf_labels:
                raise NetworkError("labels-on-leaves", v, f"labeled vertex has degree {d}")
        _check_labels(self.vertices, deg, self.leaf_labels)
        bad = _connected(self.vertices, self.adjacency)
        if bad is not None:
            raise NetworkError("connected", bad)

    @cached_property
    def adjacency(self) -> dict[str, tuple[str, ...]]:
        adj: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    @cached_property
    def degrees(self) -> dict[str, int]:
        deg = {v: len(ns) for v, ns in self.adjacency.items()}
        if self.parallel_pair is not None:
            for x in self.parallel_pair:
                deg[x] += 1
        return deg

    def degree(self, v: str) -> int:
        return self.degrees[v]

    @property
    def edge_count(self) -> int:
        return len(self.edges) + (1 if self.parallel_pair is not None else 0)

    @cached_property
    def leaves(self) -> frozenset:
        return frozenset(self.leaf_labels)

    @cached_property
    def internal_vertices(self) -> tuple[str, ...]:
        return tuple(sorted(v for v in self.vertices if v not in self.leaf_labels))

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @property
    def edge_order(self) -> tuple[Edge, ...]:
        """Edges in the order the network was built from, sorted if unknown.
        Walking edges in build order keeps traversals of large networks local."""
        return self.input_order if self.input_order is not None else self.sorted_edges

    @property
    def is_binary(self) -> bool:
        return all(d in (1, 3) for d in self.degrees.values())

    def check_binary(self) -> None:
        for v in sorted(self.vertices):
            if self.degrees[v] not in (1, 3):
                raise NetworkError("binary", v, f"degree {self.degrees[v]}")

    @property
    def reticulation_number(self) -> int:
        return self.edge_count - len(self.vertices) + 1

    def leaf_by_label(self, label: str) -> str:
        for v, lab in self.leaf_labels.items():
            if lab == label:
                return v
        raise KeyError(label)

    def pendant_edge(self, leaf: str) -> Edge:
        (nb,) = self.adjacency[leaf]
        return edge(leaf, nb)


@dataclass(frozen=True, eq=True)
class DirectedNetwork:
    """Rooted acyclic network with labeled leaves."""

    vertices: frozenset
    arcs: frozenset
    leaf_labels: Mapping[str, str] = field(default_factory=dict, hash=False)
    root: str = ROOT_ID

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arcs", frozenset(tuple(a) for a in self.arcs))
        object.__setattr__(self, "leaf_labels", dict(self.leaf_labels))
        self._validate()

    def __hash__(self):
        return hash((self.vertices, self.arcs, self.root))

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc], leaf_labels: Mapping[str, str] | None = None) -> "DirectedNetwork":
        arcs = [tuple(a) for a in arcs]
        vertices = {x for a in arcs for x in a}
        heads = {v for _, v in arcs}
        tails = {u for u, _ in arcs}
        roots = sorted(vertices - heads)
        if len(roots) != 1:
            raise NetworkError("single-root", roots[1] if len(roots) > 1 else None,
                               f"{len(roots)} vertices of indegree 0")
        if leaf_labels is None:
            leaf_labels = {v: v for v in vertices - tails}
        return cls(frozenset(vertices), frozenset(arcs), leaf_labels, roots[0])

    @classmethod
    def trusted(cls, vertices: frozenset, arcs: frozenset, leaf_labels: Mapping[str, str],
                root: str = ROOT_ID) -> "DirectedNetwork":
        """Skip validation; for algorithm outputs that are valid by construction."""
        net = object.__new__(cls)
        object.__setattr__(net, "vertices", vertices)
        object.__setattr__(net, "arcs", arcs)
        object.__setattr__(net, "leaf_labels", dict(leaf_labels))
        object.__setattr__(net, "root", root)
        return net

    def _validate(self) -> None:
        if self.root not in self.vertices:
            raise NetworkError("root-is-vertex", self.root)
        for u, v in self.arcs:
            if u == v:
                raise NetworkError("simple", u, "loop arc")
            if u not in self.vertices or v not in self.vertices:
                raise NetworkError("arcs-on-vertices", u if u not in self.vertices else v)
            if (v, u) in self.arcs:
                raise NetworkError("simple", u, f"antiparallel arcs with {v!r}")
        indeg = self.indegrees
        # scan unsorted; only a failing network pays for the sorted rescan
        if not all(self._degree_problem(v) is None for v in self.vertices):
            for v in sorted(self.vertices):
                problem = self._degree_problem(v)
                if problem is not None:
                    raise problem
        _check_labels(self.vertices, indeg, self.leaf_labels)
        cyc = self._cycle_vertex()
        if cyc is not None:
            raise NetworkError("acyclic", cyc)

    def _degree_problem(self, v: str) -> NetworkError | None:
        i, o = self.indegrees[v], self.outdegrees[v]
        if v == self.root:
            if i != 0 or o != 2:
                return NetworkError("root-degrees", v, f"indegree {i}, outdegree {o}")
            return None
        if i == 0:
            return NetworkError("single-root", v, "second vertex of indegree 0")
        if i == 1 and o == 1:
            return NetworkError("no-indeg1-outdeg1", v)
        if o == 0:
            if i != 1:
                return NetworkError("leaf-indegree-1", v, f"indegree {i}")
            if v not in self.leaf_labels:
                return NetworkError("leaves-labeled", v, "outdegree-0 vertex without label")
        elif v in self.leaf_labels:
            return NetworkError("labels-on-leaves", v, f"labeled vertex has outdegree {o}")
        return None

    def _cycle_vertex(self) -> str | None:
        indeg = dict(self.indegrees)
        queue = deque(v for v in self.vertices if indeg[v] == 0)
        seen = 0
        while queue:
            u = queue.popleft()
            seen += 1
            for w in self.children[u]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if seen == len(self.vertices):
            return None
        return min(v for v in self.vertices if indeg[v] > 0)

    @cached_property
    def children(self) -> dict[str, tuple[str, ...]]:
        ch: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.arcs:
            ch[u].append(v)
        return {v: tuple(sorted(c)) for v, c in ch.items()}

    @cached_property
    def parents(self) -> dict[str, tuple[str, ...]]:
        pa: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.arcs:
            pa[v].append(u)
        return {v: tuple(sorted(p)) for v, p in pa.items()}

    @cached_property
    def indegrees(self) -> dict[str, int]:
        return {v: len(p) for v, p in self.parents.items()}

    @cached_property
    def outdegrees(self) -> dict[str, int]:
        return {v: len(c) for v, c in self.children.items()}

    @cached_property
    def reticulations(self) -> frozenset:
        return frozenset(v for v, d in self.indegrees.items() if d >= 2)

    @cached_property
    def leaves(self) -> frozenset:
        return frozenset(self.leaf_labels)

    @property
    def is_binary(self) -> bool:
        for v in self.vertices:
            if v == self.root or v in self.leaf_labels:
                continue
            if (self.indegrees[v], self.outdegrees[v]) not in ((1, 2), (2, 1)):
                return False
        return True

    def check_binary(self) -> None:
        for v in sorted(self.vertices):
            if v == self.root or v in self.leaf_labels:
                continue
            pair = (self.indegrees[v], self.outdegrees[v])
            if pair not in ((1, 2), (2, 1)):
                raise NetworkError("binary", v, f"indegree {pair[0]}, outdegree {pair[1]}")

    def is_tree_vertex(self, v: str) -> bool:
        return self.indegrees[v] <= 1 and self.outdegrees[v] >= 2

    @property
    def root_edge(self) -> Edge:
        """The edge of the underlying network that the root subdivides."""
        a, b = self.children[self.root]
        return edge(a, b)


@dataclass(frozen=True, eq=True)
class PartlyDirectedNetwork:
    """Mixed graph: some edges carry a direction, the rest are undirected."""

    vertices: frozenset
    edges: frozenset
    arcs: frozenset
    leaf_labels: Mapping[str, str] = field(default_factory=dict, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "edges", frozenset(edge(*e) for e in self.edges))
        object.__setattr__(self, "arcs", frozenset(tuple(a) for a in self.arcs))
        object.__setattr__(self, "leaf_labels", dict(self.leaf_labels))
        for u, v in sorted(self.arcs):
            if (v, u) in self.arcs:
                raise NetworkError("no-antiparallel-arcs", u, f"arcs {u}->{v} and {v}->{u}")
            if edge(u, v) in self.edges:
                raise NetworkError("edge-or-arc", u, f"pair {u},{v} is both edge and arc")
        # delegates the graph invariants to the undirected view
        self.underlying

    def __hash__(self):
        return hash((self.vertices, self.edges, self.arcs))

    @classmethod
    def from_parts(cls, edges, arcs, leaf_labels: Mapping[str, str] | None = None) -> "PartlyDirectedNetwork":
        edges = [edge(u, v) for u, v in edges]
        arcs = [tuple(a) for a in arcs]
        vertices = {x for e in edges for x in e} | {x for a in arcs for x in a}
        if leaf_labels is None:
            und = UndirectedNetwork.from_edges(edges + [edge(*a) for a in arcs])
            leaf_labels = dict(und.leaf_labels)
        return cls(frozenset(vertices), frozenset(edges), frozenset(arcs), leaf_labels)

    @cached_property
    def underlying(self) -> UndirectedNetwork:
        return UndirectedNetwork(self.vertices, self.edges | {edge(*a) for a in self.arcs}, self.leaf_labels)

    @cached_property
    def in_arcs(self) -> dict[str, tuple[str, ...]]:
        pa: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.arcs:
            pa[v].append(u)
        return {v: tuple(sorted(p)) for v, p in pa.items()}

    @cached_property
    def arc_reticulations(self) -> frozenset:
        """Vertices entered by exactly two arcs."""
        return frozenset(v for v, p in self.in_arcs.items() if len(p) == 2)

    def direction(self, u: str, v: str) -> int:
        """+1 if the pair is an arc u->v, -1 if v->u, 0 if undirected."""
        if (u, v) in self.arcs:
            return 1
        if (v, u) in self.arcs:
            return -1
        return 0


@dataclass(frozen=True)
class DegreeMap:
    """Desired indegree of every vertex; vertices not listed default to 1."""

    desired_indegree: Mapping[str, int]

    def __getitem__(self, v: str) -> int:
        return self.desired_indegree.get(v, 1)

    @classmethod
    def from_reticulations(cls, retics: Iterable[str] | Mapping[str, int]) -> "DegreeMap":
        if isinstance(retics, Mapping):
            return cls(dict(retics))
        return cls({r: 2 for r in retics})

    def validate_for(self, net: UndirectedNetwork) -> None:
        for v, d in self.desired_indegree.items():
            if v not in net.vertices:
                raise NetworkError("degree-map-vertices", v, "desired indegree for unknown vertex")
            deg = net.degree(v)
            if v in net.leaf_labels:
                if d != 1:
                    raise NetworkError("leaf-indegree-1", v, f"desired indegree {d}")
            elif not 1 <= d <= deg - 1:
                raise NetworkError("desired-indegree-range", v, f"desired indegree {d} with degree {deg}")

    def total(self, net: UndirectedNetwork) -> int:
        # unlisted vertices count 1 each, so only the listed ones need a look
        vertices = net.vertices
        return len(vertices) + sum(d - 1 for v, d in self.desired_indegree.items() if v in vertices)

    def reticulations(self) -> frozenset:
        return frozenset(v for v, d in self.desired_indegree.items() if d >= 2)


@dataclass(frozen=True)
class ParsedNetwork:
    network: UndirectedNetwork | PartlyDirectedNetwork | DirectedNetwork
    root_edge: Edge | None = None
    reticulations: dict = field(default_factory=dict)


def parse_network_file(text: str) -> ParsedNetwork:
    """Parse the line-oriented network format, keeping root/reticulation hints."""
    edges: list[Edge] = []
    arcs: list[Arc] = []
    labels: dict[str, str] = {}
    pairs_seen: dict[Edge, int] = {}
    root_edge = None
    retics: dict[str, int] = {}
    for line_num, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kw, args = tokens[0], tokens[1:]
        if kw in ("edge", "arc"):
            if len(args) != 2:
                raise ParseError(line_num, f"'{kw}' expects 2 vertices, got {len(args)}")
            u, v = args
            if u == v:
                raise ParseError(line_num, f"loop at vertex {u!r}")
            key = edge(u, v)
            if key in pairs_seen:
                raise ParseError(line_num, f"duplicate pair {u},{v} (first on line {pairs_seen[key]})")
            pairs_seen[key] = line_num
            (edges if kw == "edge" else arcs).append(key if kw == "edge" else (u, v))
        elif kw == "leaf":
            if len(args) != 2:
                raise ParseError(line_num, "'leaf' expects a vertex and a label")
            if args[0] in labels:
                raise ParseError(line_num, f"vertex {args[0]!r} labeled twice")
            labels[args[0]] = args[1]
        elif kw == "root-edge":
            if len(args) != 2:
                raise ParseError(line_num, "'root-edge' expects 2 vertices")
            if root_edge is not None:
                raise ParseError(line_num, "second root-edge declaration")
            root_edge = edge(*args)
        elif kw == "retic":
            if len(args) not in (1, 2):
                raise ParseError(line_num, "'retic' expects a vertex and an optional indegree")
            try:
                d = int(args[1]) if len(args) == 2 else 2
            except ValueError:
                raise ParseError(line_num, f"indegree {args[1]!r} is not an integer") from None
            retics[args[0]] = d
        else:
            raise ParseError(line_num, f"unknown keyword {kw!r}")
    if not edges and not arcs:
        raise ParseError(0, "no edges or arcs")
    if arcs and not edges:
        net = DirectedNetwork.from_arcs(arcs, labels)
    elif arcs:
        vertices = {x for e in edges for x in e} | {x for a in arcs for x in a}
        net = PartlyDirectedNetwork(frozenset(vertices), frozenset(edges), frozenset(arcs), labels)
    else:
        net = UndirectedNetwork(frozenset(x for e in edges for x in e), frozenset(edges), labels,
                                input_order=tuple(edges))
    if root_edge is not None:
        und = net.underlying if isinstance(net, PartlyDirectedNetwork) else net
        if isinstance(und, UndirectedNetwork) and root_edge not in und.edges:
            raise NetworkError("root-edge-in-network", root_edge[0], f"{root_edge} is not an edge")
    return ParsedNetwork(net, root_edge, retics)


def parse_network(text: str):
    return parse_network_file(text).network


def format_network(net, root_edge: Edge | None = None, reticulations: Mapping[str, int] | Iterable[str] = ()) -> str:
    lines = []
    if isinstance(net, DirectedNetwork):
        lines += [f"arc {u} {v}" for u, v in sorted(net.arcs)]
    else:
        lines += [f"edge {u} {v}" for u, v in sorted(net.edges)]
        if isinstance(net, PartlyDirectedNetwork):
            lines += [f"arc {u} {v}" for u, v in sorted(net.arcs)]
    lines += [f"leaf {v} {lab}" for v, lab in sorted(net.leaf_labels.items())]
    if root_edge is not None:
        lines.append(f"root-edge {root_edge[0]} {root_edge[1]}")
    retics = reticulations if isinstance(reticulations, Mapping) else {r: 2 for r in reticulations}
    for r, d in sorted(retics.items()):
        lines.append(f"retic {r}" if d == 2 else f"retic {r} {d}")
    return "\n".join(lines) + "\n"


def _dot_id(v: str) -> str:
    return '"' + v.replace('"', '\\"') + '"'


def to_dot(net, reticulations: Iterable[str] = (), name: str = "N") -> str:
    """Graphviz text. Edges use ``--`` in undirected graphs; in a digraph an
    undirected edge is drawn as an arc with ``dir=none``."""
    if isinstance(net, DirectedNetwork):
        retics = set(net.reticulations)
    elif isinstance(net, PartlyDirectedNetwork):
        retics = set(net.arc_reticulations)
    else:
        retics = set()
    retics |= set(reticulations)
    directed = not isinstance(net, UndirectedNetwork)
    out = [f"{'digraph' if directed else 'graph'} {name} {{"]
    for v in sorted(net.vertices):
        attrs = []
        if v in net.leaf_labels:
            attrs.append(f"label={_dot_id(net.leaf_labels[v])}")
            attrs.append("shape=plaintext")
        elif v in retics:
            attrs.append("shape=doublecircle")
        else:
            attrs.append("shape=circle")
        out.append(f"  {_dot_id(v)} [{', '.join(attrs)}];")
    if isinstance(net, DirectedNetwork):
        out += [f"  {_dot_id(u)} -> {_dot_id(v)};" for u, v in sorted(net.arcs)]
    elif isinstance(net, PartlyDirectedNetwork):
        out += [f"  {_dot_id(u)} -> {_dot_id(v)} [dir=none];" for u, v in sorted(net.edges)]
        out += [f"  {_dot_id(u)} -> {_dot_id(v)};" for u, v in sorted(net.arcs)]
    else:
        out += [f"  {_dot_id(u)} -- {_dot_id(v)};" for u, v in sorted(net.edges)]
        if net.parallel_pair is not None:
            u, v = net.parallel_pair
            out.append(f"  {_dot_id(u)} -- {_dot_id(v)} [style=dashed];")
    out.append("}")
    return "\n".join(out) + "\n"


def underlying_network(net: DirectedNetwork) -> UndirectedNetwork:
    """Forget directions and suppress the root.

    If the root's children are adjacent the result keeps a single copy of that
    edge and records it as ``parallel_pair``.
    """
    edges = {edge(u, v) for u, v in net.arcs}
    a, b = net.children[net.root]
    edges.discard(edge(net.root, a))
    edges.discard(edge(net.root, b))
    vertices = set(net.vertices) - {net.root}
    pair = edge(a, b)
    if pair in edges:
        return UndirectedNetwork(frozenset(vertices), frozenset(edges), net.leaf_labels, parallel_pair=pair)
    edges.add(pair)
    return UndirectedNetwork(frozenset(vertices), frozenset(edges), net.leaf_labels)
