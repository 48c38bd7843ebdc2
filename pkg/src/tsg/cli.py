"""Command-line front end: ``tsg <subcommand> [options]``."""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .census import CatalogError, analyze, load_catalog, catalog_by_graph, report_json, verify_claims
from .groupid import identify_group
from .obstruct import ObstructionError, admissible, fixed_structure
from .permgroup import GroupError, conjugacy_classes, enumerate_subgroups, parse_permutation, CapExceeded
from .spatialgraph import (
    BUILTIN_NAMES,
    Graph,
    GraphError,
    automorphism_group,
    builtin_graph,
    canonical_graph_name,
    family_closure,
    load_graph,
)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def resolve_graph(selector: str) -> tuple[str, Graph]:
    """A built-in name (case-insensitive) or ``@path`` to a graph JSON file."""
    if selector.startswith("@"):
        return selector[1:], load_graph(selector[1:])
    name = canonical_graph_name(selector)
    return name, builtin_graph(name)


def _emit(data, fmt: str, text_lines) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        for line in text_lines(data):
            sys.stdout.write(line + "\n")


def _catalog(args):
    path = args.catalog or os.environ.get("TSG_CATALOG") or None
    return load_catalog(path)


def cmd_aut(args) -> int:
    name, g = resolve_graph(args.graph)
    aut = automorphism_group(g)
    data = {
        "graph": name,
        "order": aut.order,
        "iso": identify_group(aut),
        "generators": [str(x) for x in aut.generators],
        "classes": [{"representative": str(r), "size": s} for r, s in conjugacy_classes(aut)],
    }

    def text(d):
        yield f"Aut({d['graph']}): order {d['order']}, {d['iso']}"
        yield "generators: " + ", ".join(d["generators"])
        for c in d["classes"]:
            yield f"  {c['size']:>4}  {c['representative']}"

    _emit(data, args.format, text)
    return EXIT_OK


def cmd_subgroups(args) -> int:
    name, g = resolve_graph(args.graph)
    aut = automorphism_group(g)
    cap = aut.order if args.full_pipeline else 72
    classes = enumerate_subgroups(aut, max_order=cap)
    data = {
        "graph": name,
        "order": aut.order,
        "classes": [{"iso": c.iso, "order": c.order, "conjugates": len(c),
                     "generators": [str(x) for x in c.representative.generators]} for c in classes],
    }
    data["iso_classes"] = sorted({c["iso"] for c in data["classes"]})

    def text(d):
        yield f"Aut({d['graph']}): {len(d['classes'])} conjugacy classes of subgroups, " \
              f"{len(d['iso_classes'])} iso classes"
        for c in d["classes"]:
            gens = ", ".join(c["generators"]) or "id"
            yield f"  {c['order']:>3}  {c['iso']:<12} x{c['conjugates']:<3} <{gens}>"

    _emit(data, args.format, text)
    return EXIT_OK


def cmd_family(args) -> int:
    name, g = resolve_graph(args.graph or "K6")
    members = [m.as_dict() for m in family_closure(g)]
    data = {"seed": name, "members": members}

    def text(d):
        yield f"closure of {d['seed']}: {len(d['members'])} graphs"
        for m in d["members"]:
            degs = ",".join(str(x) for x in m["degrees"])
            yield f"  {m['name'] or '?':<9} V={m['vertices']:<3} E={m['edges']:<3} degrees {degs}"

    _emit(data, args.format, text)
    return EXIT_OK


def cmd_filter(args) -> int:
    if not args.perm:
        raise UsageError("filter needs --perm")
    name, g = resolve_graph(args.graph)
    alpha = parse_permutation(args.perm, g.vertices)
    verdict = admissible(alpha, g, args.mode)
    data = {"graph": name, "perm": str(alpha), "mode": args.mode,
            "fixed_structure": fixed_structure(alpha, g).to_json(), **verdict.to_json()}

    def text(d):
        reason = f" ({d['reason']})" if d["reason"] else ""
        yield f"{d['mode']} {d['perm']} on {d['graph']}: {d['status']}{reason}"
        for k, v in sorted(d["witness"].items()):
            yield f"  {k}: {json.dumps(v, sort_keys=True)}"

    _emit(data, args.format, text)
    return EXIT_OK


def cmd_candidates(args) -> int:
    name, g = resolve_graph(args.graph)
    entry = catalog_by_graph(_catalog(args)).get(name)
    report = analyze(g, name, entry, args.full_pipeline).to_json()

    def text(d):
        yield f"{d['graph']}: Aut order {d['aut']['order']} ({d['aut']['iso']}), pipeline {d['pipeline']}"
        yield "TSG+ candidates: " + ", ".join(d["tsg_plus_candidates"])
        yield "TSG candidates:  " + ", ".join(d["tsg_candidates"])
        for k, v in sorted(d["comparisons"].items()):
            yield f"  {k} vs catalog: {v}"

    _emit(report, args.format, text)
    return EXIT_OK


def _parse_override(spec: str) -> tuple[str, Graph]:
    name, sep, path = spec.partition("=")
    if not sep or not path.startswith("@"):
        raise UsageError(f"--override expects NAME=@path, got {spec!r}")
    return canonical_graph_name(name), load_graph(path[1:])


def cmd_verify(args) -> int:
    overrides = dict(_parse_override(s) for s in args.override or [])
    report = verify_claims(_catalog(args), overrides, args.full_pipeline)
    if args.format == "json":
        sys.stdout.write(report_json(report))
    else:
        for item in report["items"]:
            line = f"{item['status'].upper():<4}  {item['id']}: {item['claim']}"
            if item["status"] == "fail":
                line += f"\n      computed {json.dumps(item['computed'], sort_keys=True)}" \
                        f", expected {json.dumps(item['expected'], sort_keys=True)} [{item['cite']}]"
            sys.stdout.write(line + "\n")
        s = report["summary"]
        sys.stdout.write(f"{s['pass']} passed, {s['fail']} failed\n")
    return EXIT_MISMATCH if report["summary"]["fail"] else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--catalog", help="catalog JSON (default: embedded; env TSG_CATALOG)")
    common.add_argument("--full-pipeline", action="store_true",
                        help="enumerate subgroups even when Aut has more than 72 elements")
    graph_help = f"built-in name ({', '.join(BUILTIN_NAMES)}; case-insensitive) or @path"

    parser = argparse.ArgumentParser(prog="tsg", description="Symmetry groups of the Petersen family graphs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, helptext in (("aut", "automorphism group and its conjugacy classes"),
                          ("subgroups", "subgroups of Aut up to conjugacy"),
                          ("candidates", "candidate TSG and TSG+ classes")):
        p = sub.add_parser(cmd, parents=[common], help=helptext)
        p.add_argument("--graph", required=True, help=graph_help)
    p = sub.add_parser("family", parents=[common], help="closure under triangle-Y and Y-triangle moves")
    p.add_argument("--graph", help=graph_help + " (default K6)")
    p = sub.add_parser("filter", parents=[common], help="run the element filters on one automorphism")
    p.add_argument("--graph", required=True, help=graph_help)
    p.add_argument("--perm", help='cycle notation with spaces, e.g. "(1 2 3)(v w)"')
    p.add_argument("--mode", choices=("positive", "reversing", "any"), default="any")
    p = sub.add_parser("verify", parents=[common], help="check every claim of the catalog")
    p.add_argument("--override", action="append", metavar="NAME=@path",
                   help="replace a built-in graph for fault-injection runs")
    return parser


COMMANDS = {"aut": cmd_aut, "subgroups": cmd_subgroups, "family": cmd_family, "filter": cmd_filter,
            "candidates": cmd_candidates, "verify": cmd_verify}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except (UsageError, GraphError, GroupError, ObstructionError, CatalogError, CapExceeded) as exc:
        sys.stderr.write(f"tsg: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
