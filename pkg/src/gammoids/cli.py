"""Command-line front end.

Every subcommand builds a JSON document first; ``--format human`` renders
that document, so the two formats always carry the same facts.

Exit status: 0 on success, 1 on domain errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FilePath
from typing import Callable

from gammoids.errors import BudgetExceeded, GammoidError
from gammoids.families import FAMILIES, finite_presentation, generate_family, with_single_sink
from gammoids.graph import MODES, LinkageProblem, format_graph, parse_graph


def _split(text: str | None) -> tuple[str, ...] | None:
    if text is None:
        return None
    return tuple(x for x in text.split(",") if x)


def _load(args) -> tuple[LinkageProblem, object]:
    """The problem named on the command line and its presentation."""
    if args.graph is not None:
        problem = parse_graph(FilePath(args.graph).read_text())
        presentation = finite_presentation(problem, FilePath(args.graph).stem)
    else:
        presentation = generate_family(args.family, args.depth)
        problem = presentation.problem()
    sources = _split(getattr(args, "sources", None))
    sinks = _split(getattr(args, "sinks", None))
    b = getattr(args, "b", None)
    mode = getattr(args, "mode", None)
    if sources is not None or sinks is not None or b is not None or mode is not None:
        problem = LinkageProblem(
            problem.graph,
            problem.sources if sources is None else sources,
            problem.sinks if sinks is None else sinks,
            problem.b if b is None else b,
            problem.mode if mode is None else mode,
        )
    return problem, presentation


# -- commands -------------------------------------------------------------------


def cmd_gen(args) -> dict:
    p = generate_family(args.family, args.depth)
    if args.single_sink:
        p = with_single_sink(p)
    problem = p.problem()
    g = problem.graph
    return {
        "family": args.family,
        "depth": args.depth,
        "vertices": list(g.vertices),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in g.edges],
        "sources": list(problem.sources),
        "sinks": list(problem.sinks),
        "b": problem.b,
        "text": format_graph(problem),
    }


def cmd_link(args) -> dict:
    from gammoids.menger import disjoint_path_count, linkage_to_json, max_linkage

    problem, _ = _load(args)
    linkage, separator = max_linkage(problem)
    doc = linkage_to_json(linkage, separator)
    doc["disjoint_paths"] = disjoint_path_count(problem)
    doc["sources"] = list(problem.sources)
    return doc


def cmd_exact(args) -> dict:
    from gammoids.exact import find_exact_set, make_exact_set

    problem, _ = _load(args)
    g, b = problem.graph, problem.b
    if b is None:
        raise ValueError("exact sets need a single sink; declare one with 'b' or pass --b")
    I = problem.sources
    if args.vertex is not None:
        found = find_exact_set(g, args.vertex, I, b)
        doc = {"vertex": args.vertex, "found": found is not None}
        if found is not None:
            doc.update(found.to_json())
        return doc
    D = _split(args.set) or ()
    for v in D:
        if v not in g:
            raise ValueError(f"unknown vertex {v}")
    return make_exact_set(g, D, I, b).to_json()


def cmd_construct(args) -> dict:
    from gammoids.constructor import build_chain, check_chain, stabilized_paths

    _, p = _load(args)
    if p.b() is None:
        p = with_single_sink(p)
    chain = build_chain(p, steps=args.steps, max_depth=args.budget or 64)
    paths = stabilized_paths(chain, p, window=args.window)
    return {
        "family": p.family,
        "steps": [st.to_json() for st in chain],
        "paths": [cp.to_json() for cp in paths],
        "violations": check_chain(chain),
        "note": "dominating-ray-candidate is finite evidence, not a proof",
    }


def cmd_matroid(args) -> dict:
    from gammoids.matroid import check_axioms, circuits, gammoid

    problem, _ = _load(args)
    B = problem.sinks or ((problem.b,) if problem.b is not None else ())
    mode = args.mode or "directed-vertex"
    system = gammoid(problem.graph, B, mode=mode, oracle=args.oracle)
    report = check_axioms(system, budget=args.budget or 1 << 24)
    return {
        "ground": list(system.ground),
        "B": list(B),
        "mode": mode,
        "oracle": args.oracle,
        "rank": system.rank(),
        "circuits": [system.sort(c) for c in circuits(system, args.circuits)],
        "axioms": report.to_json(),
    }


def cmd_detect_ac(args) -> dict:
    from gammoids.ac import DEFAULT_BUDGET, find_ac_prefix, verify_embedding

    problem, _ = _load(args)
    B = problem.sinks
    try:
        emb = find_ac_prefix(problem.graph, B, args.k, budget=args.budget or DEFAULT_BUDGET)
    except BudgetExceeded:
        return {"k": args.k, "result": "budget"}
    if emb is None:
        return {"k": args.k, "result": "none"}
    problems = verify_embedding(problem.graph, B, emb)
    return {"k": args.k, "result": "embedding", "embedding": emb.to_json(), "verified": not problems}


def cmd_diagnose(args) -> dict:
    from gammoids.matroid import domination_diagnostics, nearly_finitary_verdict

    _, p = _load(args)
    depths = tuple(int(d) for d in args.depths.split(","))
    report = domination_diagnostics(p, depths=depths, rays=not args.no_rays)
    doc = report.to_json()
    doc["verdict"] = nearly_finitary_verdict(report)
    doc["note"] = "verdicts are evidence from finite truncations"
    return doc


# -- human rendering -------------------------------------------------------------


def _braces(xs) -> str:
    return "{" + ",".join(xs) + "}"


def human_gen(doc: dict) -> str:
    return doc["text"].rstrip("\n")


def human_link(doc: dict) -> str:
    lines = [f"value {doc['value']} (disjoint paths {doc['disjoint_paths']}, mode {doc['mode']})"]
    for p in doc["paths"]:
        lines.append(f"  {p['source']}: {' -> '.join(p['vertices'])}")
    sep = doc["separator"]
    lines.append(f"separator edges {_braces(sep['edges'])} vertices {_braces(sep['vertices'])}")
    return "\n".join(lines)


def human_exact(doc: dict) -> str:
    if "found" in doc and not doc["found"]:
        return f"no exact set needed for {doc['vertex']}"
    verdict = "exact" if doc["exact"] else "not exact"
    return (
        f"{verdict}, order {doc['order']}, hull {_braces(doc['hull'])}\n"
        f"members {_braces(doc['members'])}\ncrossing {_braces(doc['crossing'])}"
    )


def human_construct(doc: dict) -> str:
    lines = []
    for st in doc["steps"]:
        lines.append(
            f"step {st['step']}: {st['vertex']} {st['status']}, |D| = {len(st['D'])}, order {st['order']}, "
            f"depth {st['model_depth']}/{st['ambient_depth']}"
        )
    for p in doc["paths"]:
        counts = ",".join(str(w["count"]) for w in p["witnesses"])
        extra = f" witnesses [{counts}]" if counts else ""
        lines.append(f"P_{p['source']}: {' '.join(p['vertices'])} -> {p['verdict']}{extra}")
    lines.append("violations: " + ("none" if not doc["violations"] else "; ".join(doc["violations"])))
    return "\n".join(lines)


def human_matroid(doc: dict) -> str:
    ax = doc["axioms"]
    verdicts = " ".join(f"{a}={'ok' if ok else 'FAIL'}" for a, ok in ax["verdicts"].items())
    lines = [f"rank {doc['rank']} on {len(doc['ground'])} elements (oracle {doc['oracle']})"]
    lines.append("circuits: " + (" ".join(_braces(c) for c in doc["circuits"]) or "none"))
    lines.append("axioms: " + verdicts)
    for a, ce in ax["counterexamples"].items():
        lines.append(f"  {a} counterexample: {ce}")
    return "\n".join(lines)


def human_detect_ac(doc: dict) -> str:
    if doc["result"] != "embedding":
        return doc["result"]
    emb = doc["embedding"]
    lines = [f"AC prefix of depth {doc['k']} (verified: {doc['verified']})"]
    lines += [f"  {name} = {v}" for name, v in emb["images"].items()]
    for p in emb["paths"]:
        mark = " (trivial)" if p["trivial"] else ""
        lines.append(f"  {p['pattern']}: {' '.join(p['vertices'])}{mark}")
    return "\n".join(lines)


def human_diagnose(doc: dict) -> str:
    lines = [f"depths {doc['depths']}"]
    lines.append("flagged vertices: " + (", ".join(doc["flagged_vertices"]) or "none"))
    lines.append(f"flagged per window: {doc['flagged_per_window']}")
    lines.append(f"ray candidates per depth: {doc['ray_candidates']}")
    lines.append(f"nearly finitary: {doc['verdict']} ({doc['note']})")
    return "\n".join(lines)


COMMANDS: dict[str, tuple[Callable, Callable]] = {
    "gen": (cmd_gen, human_gen),
    "link": (cmd_link, human_link),
    "exact": (cmd_exact, human_exact),
    "construct": (cmd_construct, human_construct),
    "matroid": (cmd_matroid, human_matroid),
    "detect-ac": (cmd_detect_ac, human_detect_ac),
    "diagnose": (cmd_diagnose, human_diagnose),
}


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--budget", type=_positive, help="cap on enumeration or search size")

    source = argparse.ArgumentParser(add_help=False)
    where = source.add_mutually_exclusive_group(required=True)
    where.add_argument("--graph", help="graph file")
    where.add_argument("--family", choices=FAMILIES, help="builtin family")
    source.add_argument("--depth", type=_positive, default=3, help="truncation depth of the family")

    terminals = argparse.ArgumentParser(add_help=False)
    terminals.add_argument("--sources", help="comma-separated source vertices")
    terminals.add_argument("--sinks", help="comma-separated sink vertices (B)")
    terminals.add_argument("--b", help="single sink vertex")
    terminals.add_argument("--mode", choices=MODES)

    parser = argparse.ArgumentParser(prog="gammoids", description="Linkages, exact sets and gammoids.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", parents=[common], help="print a family truncation")
    gen.add_argument("--family", choices=FAMILIES, required=True)
    gen.add_argument("--depth", type=_positive, default=3)
    gen.add_argument("--single-sink", action="store_true", help="attach one sink fed by every B vertex")

    sub.add_parser("link", parents=[common, source, terminals], help="maximum linkage and minimum separator")

    exact = sub.add_parser("exact", parents=[common, source, terminals], help="exactness of a vertex set")
    what = exact.add_mutually_exclusive_group(required=True)
    what.add_argument("--set", help="comma-separated vertex set D")
    what.add_argument("--vertex", help="find an exact set containing this vertex")

    construct = sub.add_parser("construct", parents=[common, source], help="nested exact hulls and stabilized paths")
    construct.add_argument("--steps", type=_positive, default=10)
    construct.add_argument("--window", type=_positive, default=3)

    matroid = sub.add_parser("matroid", parents=[common, source, terminals], help="gammoid rank, circuits and axioms")
    matroid.add_argument("--oracle", choices=("flow", "brute"), default="flow")
    matroid.add_argument("--circuits", type=_positive, default=None, help="largest circuit size to list")

    ac = sub.add_parser("detect-ac", parents=[common, source, terminals], help="search for an alternating comb prefix")
    ac.add_argument("--k", type=_positive, required=True)

    diag = sub.add_parser("diagnose", parents=[common, source], help="domination evidence and nearly-finitary verdict")
    diag.add_argument("--depths", default="4,6,8,10,12")
    diag.add_argument("--no-rays", action="store_true", help="skip the chain construction")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    command, render = COMMANDS[args.command]
    try:
        doc = command(args)
    except (GammoidError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(render(doc))
    return 1 if doc.get("result") == "budget" else 0


run = main

if __name__ == "__main__":
    sys.exit(main())
