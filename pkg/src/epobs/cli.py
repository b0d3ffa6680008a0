"""Command-line front end: ``epobs gen``, ``epobs verify`` and ``epobs export``.

Exit codes: 0 expected verdict, 1 unexpected verdict, 2 usage error,
3 I/O error, 4 search timeout.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .claims import CLAIMS, build_instance
from .constructions import (
    CounterexampleInstance,
    build_binary_tree,
    build_condensed_wall,
    build_grid_instance,
    build_ladder,
    subdivided_binary_tree,
    v_link,
)
from .formats import certificate_overlay, dumps_json, graph_from_json, graph_to_json, to_dot, to_graph6
from .graph import Graph, GraphError
from .reports import TIMEOUT

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_TIMEOUT = 4

GRAPH_KINDS = (
    "condensed-wall",
    "ladder",
    "grid",
    "binary-tree",
    "ladder-counterexample",
    "tree-counterexample",
)


class UsageError(Exception):
    pass


def _wall_roles(w) -> Dict[str, Any]:
    return {
        "a": w.a,
        "b": w.b,
        "c": w.c,
        "d": w.d,
        "z": list(w.z),
        "layers": [sorted(w.layer(j)) for j in range(1, w.size + 1)],
    }


def _instance_roles(inst: CounterexampleInstance) -> Dict[str, Any]:
    roles = _wall_roles(inst.wall)
    lab = inst.pattern.label
    roles["eps"] = {lab(s): x for s, x in sorted(inst.eps.vertex_map.items())}
    roles["parts"] = {k: sorted(v) for k, v in sorted(inst.parts.items()) if not k.endswith("_edges")}
    return roles


def generate(kind: str, args: argparse.Namespace) -> Tuple[Graph, Dict[str, Any]]:
    """Build the requested graph and its role table."""
    if kind == "condensed-wall":
        w = build_condensed_wall(_need(args.size, "--size"))
        roles = _wall_roles(w)
        roles["eps"] = {}
        return w.graph, roles
    if kind == "ladder":
        lad = build_ladder(_need(args.length, "--length"))
        return lad.graph, {"rungs": [list(e) for e in lad.rungs]}
    if kind == "grid":
        inst = build_grid_instance(_need(args.size, "--size"))
        return inst.graph, {k: sorted(getattr(inst, k)) for k in "ABCD"}
    if kind == "binary-tree":
        h = _need(args.height, "--height")
        t = subdivided_binary_tree(h, args.subdivide) if args.subdivide else build_binary_tree(h)
        if args.link:
            t = v_link(t, args.link)
        return t.graph, {"root": t.root, "attachment": t.attachment}
    if kind in ("ladder-counterexample", "tree-counterexample"):
        params = _claim_params(args)
        params["kind"] = "ladder" if kind == "ladder-counterexample" else "tree"
        inst = build_instance(params)
        return inst.graph, _instance_roles(inst)
    raise UsageError(f"unknown graph kind {kind!r}")


def _need(value: Optional[int], flag: str) -> int:
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _claim_params(args: argparse.Namespace) -> Dict[str, Any]:
    keys = (
        "size", "mode", "budget", "sample", "seed", "height", "w", "subdivide", "kind", "length",
        "cut1", "cut2", "bundle_len", "deletions", "vertex", "h_cap", "node_budget",
    )
    return {k: getattr(args, k, None) for k in keys if getattr(args, k, None) is not None}


def _write(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


# -- subcommands -------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    g, roles = generate(args.kind, args)
    if args.format == "json":
        text = dumps_json(graph_to_json(g, roles))
    elif args.format == "graph6":
        text = to_graph6(g) + "\n"
    else:
        text = to_dot(g, name=args.kind)
    _write(text, args.output)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    claim = CLAIMS[args.claim]
    params = _claim_params(args)
    if args.exhaustive:
        params.pop("sample", None)
    report = claim.run(params)
    expected = claim.expected(params)
    _write(report.dumps(timing=args.timing), args.output)
    if report.verdict == TIMEOUT and expected != TIMEOUT:
        return EXIT_TIMEOUT
    if expected is None or report.verdict == expected:
        return EXIT_OK
    print(f"epobs: {args.claim}: verdict {report.verdict}, expected {expected}", file=sys.stderr)
    return EXIT_UNEXPECTED


def cmd_export(args: argparse.Namespace) -> int:
    report = _read_json(args.report)
    cert = report.get("certificate") if isinstance(report, dict) else None
    if cert is None:
        raise UsageError("report carries no certificate")
    if args.format == "json":
        _write(dumps_json(cert), args.output)
        return EXIT_OK
    if args.graph is None:
        raise UsageError("dot-overlay needs --graph GRAPH.json")
    g, _ = graph_from_json(_read_json(args.graph))
    _write(certificate_overlay(g, cert), args.output)
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _add_instance_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--size", type=int, help="wall size r (grid parameter for the grid)")
    p.add_argument("--length", type=int, help="ladder length")
    p.add_argument("--cut1", type=int, help="first removed rung of a ladder instance")
    p.add_argument("--cut2", type=int, help="second removed rung of a ladder instance")
    p.add_argument("--height", type=int, help="binary tree height")
    p.add_argument("--w", type=int, help="weight level of the tree decomposition")
    p.add_argument("--bundle-len", dest="bundle_len", type=int, help="length of bundle paths in tree instances")
    p.add_argument("--subdivide", type=int, default=None, help="subdivide every tree edge this many times")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="epobs", description="Build and check edge-Erdos-Posa obstruction graphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a graph instance")
    gen.add_argument("kind", choices=GRAPH_KINDS)
    _add_instance_flags(gen)
    gen.add_argument("--link", type=int, default=0, help="prepend a path of this length to a binary tree root")
    gen.add_argument("--format", choices=("json", "graph6", "dot"), default="json")
    gen.add_argument("-o", "--output", help="output file (default stdout)")
    gen.set_defaults(func=cmd_gen)

    ver = sub.add_parser("verify", help="run a named check and print its report")
    ver.add_argument("claim", choices=sorted(CLAIMS))
    _add_instance_flags(ver)
    ver.add_argument("--kind", choices=("ladder", "tree"), help="instance kind for instance checks")
    ver.add_argument("--mode", choices=("vertex", "edge"), help="disjointness between the two linkages")
    ver.add_argument("--budget", type=int, help="maximum number of deleted wall edges")
    how = ver.add_mutually_exclusive_group()
    how.add_argument("--exhaustive", action="store_true", help="check every deletion set (default)")
    how.add_argument("--sample", type=int, help="check this many seeded random deletion sets")
    ver.add_argument("--seed", type=int, help="seed for --sample")
    ver.add_argument("--deletions", type=int, help="deletion set size for deletion-survival")
    ver.add_argument("--vertex", help="pattern vertex label for lambda-spot")
    ver.add_argument("--h-cap", dest="h_cap", type=int, help="highest level tried by lambda-spot")
    ver.add_argument("--node-budget", dest="node_budget", type=int, help="search node budget (overrides EPOBS_NODE_BUDGET)")
    ver.add_argument("--timing", action="store_true", help="include wall time in the report")
    ver.add_argument("-o", "--output", help="report file (default stdout)")
    ver.set_defaults(func=cmd_verify)

    exp = sub.add_parser("export", help="export the certificate of a saved report")
    exp.add_argument("report", help="report JSON written by 'epobs verify'")
    exp.add_argument("--format", choices=("json", "dot-overlay"), default="json")
    exp.add_argument("--graph", help="host graph JSON written by 'epobs gen' (for dot-overlay)")
    exp.add_argument("-o", "--output", help="output file (default stdout)")
    exp.set_defaults(func=cmd_export)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, GraphError, ValueError) as exc:
        print(f"epobs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"epobs: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
