"""Command-line front-end.

Exit codes: 0 yes/success, 3 no, 2 invalid input, 4 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .class_orient import Budget, BudgetExceeded, c_orientation, is_tree_based_undirected, rootable_edges
from .classes import (NAMED_CLASSES, NetworkClass, camels, class_membership, find_base_tree, find_w_fence,
                      invisible_reticulations, is_orchard, stacks, w_shapes)
from .fixtures import MissingFixture, load_fixture
from .generate import GeneratorConfig, InfeasibleConfig, generate_random_directed
from .network import (DegreeMap, DirectedNetwork, NetworkError, ParsedNetwork, ParseError, PartlyDirectedNetwork,
                      UndirectedNetwork, edge, format_network, parse_network_file, to_dot, underlying_network)
from .orient import RootedInstance, is_semi_directed, orient
from .partly_directed import partly_directed_c_orientation
from .structure import blob_decomposition, graph_stats
from .suite import SUITES, run_suite

EXIT_YES, EXIT_INVALID, EXIT_NO, EXIT_BUDGET = 0, 2, 3, 4
FIXTURE_PREFIX = "fixture:"


class InvalidInput(ValueError):
    pass


def _read_network(spec: str) -> ParsedNetwork:
    if spec.startswith(FIXTURE_PREFIX):
        return load_fixture(spec[len(FIXTURE_PREFIX):])
    text = sys.stdin.read() if spec == "-" else Path(spec).read_text(encoding="utf-8")
    return parse_network_file(text)


def _undirected(parsed: ParsedNetwork) -> UndirectedNetwork:
    net = parsed.network
    if not isinstance(net, UndirectedNetwork):
        raise InvalidInput("expected an undirected network (edge lines only)")
    return net


def _edge_arg(text: str):
    parts = text.replace(",", " ").split()
    if len(parts) != 2:
        raise InvalidInput(f"edge {text!r} should look like u,v")
    return edge(*parts)


def _read_degrees(path: str) -> dict[str, int]:
    out = {}
    for num, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 2 or not line[1].lstrip("-").isdigit():
            raise InvalidInput(f"{path}:{num}: expected 'vertex indegree'")
        out[line[0]] = int(line[1])
    return out


def _arcs(net: DirectedNetwork) -> list[list[str]]:
    return [list(a) for a in sorted(net.arcs)]


class Output:
    def __init__(self, fmt: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {}

    def emit(self) -> None:
        if self.fmt == "json":
            print(json.dumps(self.data, indent=2, sort_keys=True))
        else:
            for line in self.lines:
                print(line)


# --- subcommands ---------------------------------------------------------------

def cmd_orient(args, out: Output) -> int:
    parsed = _read_network(args.network)
    net = _undirected(parsed)
    root = _edge_arg(args.root_edge) if args.root_edge else parsed.root_edge
    if root is None:
        raise InvalidInput("no root edge given (--root-edge or a root-edge line)")
    if args.degrees:
        degrees = _read_degrees(args.degrees)
    elif args.retic:
        degrees = {v: 2 for v in args.retic}
    else:
        degrees = dict(parsed.reticulations)
    result = orient(RootedInstance(net, root, DegreeMap(degrees)))
    out.data = {"oriented": result.oriented, "root_edge": list(root)}
    if result.oriented:
        out.data["arcs"] = _arcs(result.network)
        out.lines = [f"arc {u} {v}" for u, v in sorted(result.network.arcs)]
        return EXIT_YES
    out.data["reason"] = result.reason
    out.lines = [f"NO {result.reason}"]
    if result.cut is not None:
        out.data["cut"] = {"vertices": sorted(result.cut.v_prime),
                           "edges": sorted(list(e) for e in result.cut.e_prime)}
        out.lines += [f"cut-vertex {v}" for v in sorted(result.cut.v_prime)]
        out.lines += [f"cut-edge {u} {v}" for u, v in sorted(result.cut.e_prime)]
    return EXIT_NO


def _witness(net: DirectedNetwork, tag: str, member: bool) -> tuple[str, list]:
    if tag == "orchard":
        ok, seq = is_orchard(net)
        if ok:
            return "picks", [[m.kind, m.first, m.second] for m in seq.moves]
        return "stalled", [list(a) for a in seq.stalled]
    if tag == "tree_based":
        if member:
            return "base_tree", [list(a) for a in sorted(find_base_tree(net))]
        fence = find_w_fence(net)
        return "w_fence", list(fence) if fence else []
    if member:
        return "none", []
    if tag == "tree_child":
        return "offending", sorted({v for s in stacks(net) for v in s} | {v for w in w_shapes(net) for v in w})
    if tag == "stack_free":
        return "offending", sorted({v for s in stacks(net) for v in s})
    if tag == "valid":
        bad = {v for s in stacks(net) for v in s} | {v for c in camels(net) for v in c}
        return "offending", sorted(bad)
    if tag == "reticulation_visible":
        return "invisible_reticulations", invisible_reticulations(net)
    return "none", []


def cmd_check(args, out: Output) -> int:
    net = _read_network(args.network).network
    if not isinstance(net, DirectedNetwork):
        raise InvalidInput("check expects a directed network (arc lines only)")
    net.check_binary()
    tag = NetworkClass.named(args.cls).tag
    member = class_membership(net, NetworkClass(tag))
    kind, witness = _witness(net, tag, member)
    out.data = {"class": tag, "member": member, "witness_kind": kind, "witness": witness}
    out.lines = [str(member).lower()]
    if witness:
        out.lines.append(f"{kind} " + " ".join(" ".join(w) if isinstance(w, list) else w for w in witness))
    return EXIT_YES if member else EXIT_NO


def cmd_class_orient(args, out: Output) -> int:
    net = _undirected(_read_network(args.network))
    cls = NetworkClass.named(args.cls)
    budget = Budget(args.budget)
    if args.all_roots:
        found = rootable_edges(net, cls, budget, algorithm=args.algorithm)
        out.data = {"class": cls.tag, "rootable": [{"edge": list(e), "reticulations": sorted(found.reticulations[e])}
                                                    for e in found.edges()]}
        out.lines = [f"root-edge {u} {v} retic {' '.join(sorted(found.reticulations[(u, v)]))}".rstrip()
                     for u, v in found.edges()]
        if not found:
            out.lines = ["NO no_rootable_edge"]
        return EXIT_YES if found else EXIT_NO
    result = c_orientation(net, cls, budget, algorithm=args.algorithm)
    out.data = {"class": cls.tag, "found": result.found}
    if not result.found:
        out.data["reason"] = result.reason
        out.lines = [f"NO {result.reason}"]
        return EXIT_NO
    out.data.update(root_edge=list(result.root_edge), arcs=_arcs(result.network))
    out.lines = format_network(result.network).splitlines()
    return EXIT_YES


def cmd_pd_orient(args, out: Output) -> int:
    net = _read_network(args.network).network
    if isinstance(net, UndirectedNetwork):
        net = PartlyDirectedNetwork(net.vertices, net.edges, frozenset(), net.leaf_labels)
    elif isinstance(net, DirectedNetwork):
        raise InvalidInput("pd-orient expects edge and arc lines, not a fully directed network")
    result = partly_directed_c_orientation(net, Budget(args.budget))
    out.data = {"found": result.found}
    if not result.found:
        out.data["reason"] = result.reason
        out.lines = [f"NO {result.reason}"]
        return EXIT_NO
    out.data.update(root_edge=list(result.root_edge), arcs=_arcs(result.network))
    out.lines = format_network(result.network).splitlines()
    return EXIT_YES


def cmd_semi_directed(args, out: Output) -> int:
    net = _read_network(args.network).network
    if not isinstance(net, PartlyDirectedNetwork):
        raise InvalidInput("semi-directed expects a partly-directed network (edge and arc lines)")
    yes, witness = is_semi_directed(net)
    out.data = {"semi_directed": yes}
    out.lines = [str(yes).lower()]
    if witness:
        root, d = witness
        out.data.update(root_edge=list(root), arcs=_arcs(d))
        out.lines.append(f"root-edge {root[0]} {root[1]}")
    return EXIT_YES if yes else EXIT_NO


def cmd_tree_based_undirected(args, out: Output) -> int:
    net = _undirected(_read_network(args.network))
    yes = is_tree_based_undirected(net, Budget(args.budget))
    out.data = {"tree_based": yes}
    out.lines = [str(yes).lower()]
    return EXIT_YES if yes else EXIT_NO


def cmd_stats(args, out: Output) -> int:
    net = _read_network(args.network).network
    und = underlying_network(net) if isinstance(net, DirectedNetwork) else getattr(net, "underlying", net)
    k, level = graph_stats(und)
    dec = blob_decomposition(und)
    out.data = {"kind": type(net).__name__, "vertices": len(und.vertices), "edges": und.edge_count,
                "leaves": len(und.leaf_labels), "reticulation_number": k, "level": level,
                "blobs": len(dec.blobs), "cut_edges": len(dec.cut_edges), "binary": und.is_binary}
    out.lines = [f"{key} {out.data[key]}" for key in ("kind", "vertices", "edges", "leaves",
                                                      "reticulation_number", "level", "blobs", "cut_edges",
                                                      "binary")]
    return EXIT_YES


def cmd_to_dot(args, out: Output) -> int:
    parsed = _read_network(args.network)
    text = to_dot(parsed.network, parsed.reticulations, name=args.name)
    out.data = {"dot": text}
    out.lines = text.rstrip("\n").splitlines()
    return EXIT_YES


def cmd_gen(args, out: Output) -> int:
    chains = None
    if args.chains:
        lo, _, hi = args.chains.partition(",")
        chains = (int(lo), int(hi or lo))
    level = args.level if args.level is not None else min(args.reticulations, 1 if args.reticulations else 0)
    cfg = GeneratorConfig(args.leaves, level, args.reticulations, chains, args.seed)
    net = generate_random_directed(cfg)
    if args.undirected:
        und = underlying_network(net)
        text = format_network(und) if und.parallel_pair is None else None
        if text is None:
            raise InvalidInput("the underlying network has a parallel pair; try another seed")
    else:
        text = format_network(net)
    out.data = {"network": text}
    out.lines = text.rstrip("\n").splitlines()
    return EXIT_YES


def cmd_suite(args, out: Output) -> int:
    report = run_suite(args.name, args.budget, fixture_dir=args.fixtures, seed=args.seed)
    out.data = report.to_dict(timings=args.timings)
    out.lines = report.lines()
    if report.budget_exceeded:
        return EXIT_BUDGET
    return EXIT_YES if report.passed else EXIT_NO


# --- parser --------------------------------------------------------------------

def _class_name(text: str) -> str:
    return text.replace("-", "_")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--seed", type=int, default=default(0), help="random seed")
    parser.add_argument("--budget", type=float, default=default(None), help="time budget in seconds")
    parser.add_argument("--format", choices=("text", "json"), default=default("text"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netorient", description="Orient phylogenetic networks.")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, network=True):
        p = sub.add_parser(name, parents=[common], help=help_text)
        if network:
            p.add_argument("--network", required=True,
                           help=f"network file, '-' for stdin, or {FIXTURE_PREFIX}NAME")
        p.set_defaults(func=fn)
        return p

    p = add("orient", cmd_orient, "orient with a given root edge and reticulations")
    p.add_argument("--root-edge")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--retic", nargs="+", metavar="V")
    group.add_argument("--degrees", metavar="FILE", help="lines 'vertex indegree'")

    p = add("check", cmd_check, "test a directed network for class membership")
    p.add_argument("--class", dest="cls", required=True, choices=NAMED_CLASSES, type=_class_name)

    p = add("class-orient", cmd_class_orient, "find an orientation within a class")
    p.add_argument("--class", dest="cls", required=True, choices=NAMED_CLASSES + ("any",), type=_class_name)
    p.add_argument("--all-roots", action="store_true")
    p.add_argument("--algorithm", choices=("exhaustive", "fpt", "blob"), default="blob")

    add("pd-orient", cmd_pd_orient, "extend a partly-directed network to a directed one")
    add("semi-directed", cmd_semi_directed, "test whether a partly-directed network is semi-directed")
    add("tree-based-undirected", cmd_tree_based_undirected, "test undirected tree-basedness")
    add("stats", cmd_stats, "size, reticulation number, level")
    p = add("to-dot", cmd_to_dot, "render as Graphviz DOT")
    p.add_argument("--name", default="N")

    p = add("gen", cmd_gen, "generate a random network", network=False)
    p.add_argument("--leaves", type=int, default=5)
    p.add_argument("--reticulations", type=int, default=0)
    p.add_argument("--level", type=int)
    p.add_argument("--chains", help="lo,hi leaves per side")
    p.add_argument("--undirected", action="store_true")

    p = add("suite", cmd_suite, "run the acceptance or property suite", network=False)
    p.add_argument("name", choices=SUITES)
    p.add_argument("--fixtures", help="directory overriding the packaged fixtures")
    p.add_argument("--timings", action="store_true", help="include timings in JSON output")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Output(args.format)
    try:
        code = args.func(args, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInput, ParseError, NetworkError, MissingFixture, InfeasibleConfig, OSError, ValueError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out.emit()
    return code


if __name__ == "__main__":
    sys.exit(main())
