"""Command-line front end.

Exit codes: 0 YES (or success), 1 NO, 2 usage, parse or internal error,
3 budget exceeded. Nothing else escapes ``main``.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path
from typing import Optional, Sequence

from .dpsolver import BudgetExceeded, Decision, decide
from .drawing import DrawingError, TwoLayerDrawing, drawing_from_json, render_svg, verify_drawing
from .graph import BipartiteGraph, GraphParseError, parse_graph
from .oracle import Outcome, SearchBudget, decide_bruteforce_parallel, generate
from .reduction import apply_reductions

EXIT_YES, EXIT_NO, EXIT_ERROR, EXIT_BUDGET = 0, 1, 2, 3
_EXIT = {Outcome.YES: EXIT_YES, Outcome.NO: EXIT_NO, Outcome.BUDGET_EXCEEDED: EXIT_BUDGET}

_DRAWING_SCHEMA = {
    "type": "object",
    "required": ["x_order", "y_order"],
    "additionalProperties": False,
    "properties": {
        "x_order": {"type": "array", "items": {"type": "string"}},
        "y_order": {"type": "array", "items": {"type": "string"}},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["answer", "method", "reason", "certificate", "reduced_sizes", "k_used", "stats"],
    "properties": {
        "answer": {"enum": ["YES", "NO", "BUDGET_EXCEEDED"]},
        "method": {"enum": ["EARLY_REJECT", "DP", "BRUTE_FORCE", "TRIVIAL"]},
        "reason": {"type": "string"},
        "certificate": {"oneOf": [{"type": "null"}, {"type": "string"}, _DRAWING_SCHEMA]},
        "reduced_sizes": {
            "type": "object",
            "additionalProperties": False,
            "required": ["vertices", "edges"],
            "properties": {
                "vertices": {"type": ["integer", "null"], "minimum": 0},
                "edges": {"type": ["integer", "null"], "minimum": 0},
            },
        },
        "k_used": {"type": ["integer", "null"], "minimum": 0},
        "stats": {
            "type": "object",
            "additionalProperties": False,
            "required": ["states", "nodes", "elapsed_ms"],
            "properties": {
                "states": {"type": "integer", "minimum": 0},
                "nodes": {"type": "integer", "minimum": 0},
                "elapsed_ms": {"type": ["number", "null"], "minimum": 0},
            },
        },
    },
}


class CliError(Exception):
    """A user-facing failure that maps to exit code 2."""


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _load_graph(path: str) -> BipartiteGraph:
    try:
        return parse_graph(_read(path))
    except GraphParseError as exc:
        raise CliError(f"{path}: {exc}") from None


def _swap(g: BipartiteGraph) -> BipartiteGraph:
    return BipartiteGraph(g.y_vertices, g.x_vertices, [(y, x) for x, y in g.edges])


def _budget(args) -> SearchBudget:
    return SearchBudget(getattr(args, "max_nodes", None), getattr(args, "max_seconds", None))


def _drawing_dict(d: TwoLayerDrawing) -> dict:
    return {"x_order": list(d.x_order), "y_order": list(d.y_order)}


# -- decide -----------------------------------------------------------------


def _cli_report(dec: Decision, certificate, timing: bool) -> dict:
    return {
        "answer": dec.answer.value,
        "method": dec.method.value,
        "reason": dec.reason,
        "certificate": certificate,
        "reduced_sizes": {"vertices": dec.reduced_vertices, "edges": dec.reduced_edges},
        "k_used": dec.k_used,
        "stats": {
            "states": dec.stats.get("states", 0),
            "nodes": dec.stats.get("nodes", 0),
            "elapsed_ms": round(dec.elapsed_ms, 3) if timing else None,
        },
    }


def _emit(report: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(report))
        return
    print(f"answer: {report['answer']}")
    print(f"method: {report['method']}")
    print(f"reason: {report['reason']}")
    sizes = report["reduced_sizes"]
    if sizes["vertices"] is not None:
        print(f"reduced: {sizes['vertices']} vertices, {sizes['edges']} edges")
    if report["k_used"] is not None:
        print(f"k: {report['k_used']}")
    cert = report["certificate"]
    if isinstance(cert, dict):
        print(f"x_order: {' '.join(cert['x_order'])}")
        print(f"y_order: {' '.join(cert['y_order'])}")
    elif cert is not None:
        print(f"certificate: {cert}")
    st = report["stats"]
    print(f"states: {st['states']}  nodes: {st['nodes']}" + (f"  elapsed_ms: {st['elapsed_ms']}" if st["elapsed_ms"] is not None else ""))


def cmd_decide(args) -> int:
    g = _load_graph(args.file)
    work = _swap(g) if args.swap_sides else g
    try:
        dec = decide(
            work,
            method=args.method,
            k=args.k,
            bf_threshold=args.bf_threshold,
            budget=SearchBudget(args.max_nodes, args.max_seconds),
            dp_budget=SearchBudget(args.max_states, args.max_seconds),
            reduce_first=args.reduce_first,
        )
    except BudgetExceeded as exc:
        report = {
            "answer": Outcome.BUDGET_EXCEEDED.value,
            "method": exc.method.value,
            "reason": "search budget exceeded",
            "certificate": None,
            "reduced_sizes": {"vertices": None, "edges": None},
            "k_used": args.k,
            "stats": {"states": exc.stats.get("states", 0), "nodes": exc.stats.get("nodes", 0), "elapsed_ms": None},
        }
        _emit(report, args.json)
        return EXIT_BUDGET
    except ValueError as exc:
        raise CliError(str(exc)) from None

    cert_field = None
    drawing = dec.certificate
    if drawing is not None:
        if args.swap_sides:
            drawing = TwoLayerDrawing(drawing.y_order, drawing.x_order, g)
        rep = verify_drawing(drawing, args.k)
        if not rep.fan_planar or rep.k_planar is False:
            raise RuntimeError("certificate failed re-verification")
        if args.certificate:
            _write(args.certificate, drawing.to_json() + "\n")
            cert_field = args.certificate
        else:
            cert_field = _drawing_dict(drawing)
        if args.svg:
            _write(args.svg, render_svg(drawing, rep))
        if args.plot:
            from .plotting import plot_drawing

            plot_drawing(drawing, args.plot, rep)
    _emit(_cli_report(dec, cert_field, args.timing), args.json)
    return _EXIT[dec.answer]


# -- verify -----------------------------------------------------------------


def cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    try:
        d = drawing_from_json(_read(args.drawing), g)
    except DrawingError as exc:
        raise CliError(f"{args.drawing}: {exc}") from None
    rep = verify_drawing(d, args.k)
    ok = rep.fan_planar and rep.k_planar is not False
    if args.svg:
        _write(args.svg, render_svg(d, rep))
    if args.json:
        print(
            json.dumps(
                {
                    "fan_planar": rep.fan_planar,
                    "k": rep.k,
                    "k_planar": rep.k_planar,
                    "max_crossings_per_edge": rep.max_crossings_per_edge,
                    "crossings_per_edge": [[x, y, c] for (x, y), c in rep.crossings_per_edge.items()],
                    "violating_triple": None if rep.violating_triple is None else [list(e) for e in rep.violating_triple],
                }
            )
        )
    else:
        print(f"fan-planar={'true' if rep.fan_planar else 'false'}")
        if rep.k is not None:
            print(f"{rep.k}-planar={'true' if rep.k_planar else 'false'}")
        print(f"max crossings per edge: {rep.max_crossings_per_edge}")
        for (x, y), c in rep.crossings_per_edge.items():
            print(f"  {x} {y}: {c}")
        if rep.violating_triple:
            print("violating triple: " + ", ".join(f"{x}-{y}" for x, y in rep.violating_triple))
    return EXIT_YES if ok else EXIT_NO


# -- reduce / oracle / gen / report -----------------------------------------


def cmd_reduce(args) -> int:
    g = _load_graph(args.file)
    reduced, trace = apply_reductions(g)
    if args.trace:
        _write(args.trace, trace.to_json() + "\n")
    sys.stdout.write(reduced.serialize())
    return EXIT_YES


def cmd_oracle(args) -> int:
    g = _load_graph(args.file)
    res = decide_bruteforce_parallel(g, args.k, _budget(args), args.threads)
    print(res.outcome.value)
    if res.drawing is not None:
        d = TwoLayerDrawing(res.drawing.x_order, res.drawing.y_order, g)
        print(d.to_json())
    return _EXIT[res.outcome]


def cmd_gen(args) -> int:
    try:
        if args.random is not None:
            graphs = generate("random", *args.random)
        else:
            graphs = generate("exhaustive", *args.exhaustive)
        first = True
        for g in graphs:
            if not first:
                sys.stdout.write("---\n")
            sys.stdout.write(g.serialize())
            first = False
    except ValueError as exc:
        raise CliError(str(exc)) from None
    return EXIT_YES


def cmd_report(args) -> int:
    from . import report as rpt
    from .plotting import plot_crossings_vs_degree, plot_drawing, plot_state_growth

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data = rpt.run_all(args.random_dp, args.random_reduction)
    _write(str(out / "report.json"), rpt.dumps(data))
    growth = data["2_dp_oracle"]["path_state_growth"]
    plot_state_growth({k: v["points"] for k, v in growth.items()}, str(out / "state_growth.png"))
    plot_crossings_vs_degree(data["5_observation_k_planar"]["histogram"], str(out / "crossings_vs_degree.png"))
    witness = data["6_degree7_witness"]
    if witness["found"]:
        g = parse_graph(witness["witness"])
        d = TwoLayerDrawing(witness["drawing"]["x_order"], witness["drawing"]["y_order"], g)
        plot_drawing(d, str(out / "degree7_witness.png"))
    for name, section in data.items():
        print(f"{name}: {'PASS' if section['passed'] else 'FAIL'}")
    return EXIT_YES if all(s["passed"] for s in data.values()) else EXIT_NO


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fanplanar", description="2-layer fan-planarity tools")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decide", help="decide 2-layer fan-planarity of a graph file")
    d.add_argument("file")
    d.add_argument("--k", type=int, help="crossing bound per component (default: its max degree)")
    d.add_argument("--method", choices=("auto", "dp", "bf"), default="auto")
    d.add_argument("--certificate", metavar="OUT.json", help="write the drawing here instead of inline")
    d.add_argument("--svg", metavar="OUT.svg")
    d.add_argument("--plot", metavar="OUT.png", help="matplotlib rendering of the certificate")
    d.add_argument("--json", action="store_true")
    d.add_argument("--max-nodes", type=int, help="brute-force node budget")
    d.add_argument("--max-states", type=int, help="DP state budget")
    d.add_argument("--max-seconds", type=float)
    d.add_argument("--bf-threshold", type=int, default=14, help="use brute force on components up to this size")
    d.add_argument("--reduce-first", action="store_true", help="with --method bf, reduce before searching")
    d.add_argument("--swap-sides", action="store_true", help="exchange the roles of X and Y")
    d.add_argument("--timing", action="store_true", help="report elapsed time (makes output non-deterministic)")
    d.set_defaults(func=cmd_decide)

    v = sub.add_parser("verify", help="check a drawing of a graph")
    v.add_argument("graph")
    v.add_argument("drawing")
    v.add_argument("--k", type=int)
    v.add_argument("--json", action="store_true")
    v.add_argument("--svg", metavar="OUT.svg")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reduce", help="apply the reduction rules")
    r.add_argument("file")
    r.add_argument("--trace", metavar="OUT.json")
    r.set_defaults(func=cmd_reduce)

    o = sub.add_parser("oracle", help="exhaustive search over drawings")
    o.add_argument("file")
    o.add_argument("--k", type=int)
    o.add_argument("--max-nodes", type=int)
    o.add_argument("--max-seconds", type=float)
    o.add_argument("--threads", type=int, default=1, help="worker processes")
    o.set_defaults(func=cmd_oracle)

    gen = sub.add_parser("gen", help="generate graphs")
    src = gen.add_mutually_exclusive_group(required=True)
    src.add_argument("--random", nargs=4, type=int, metavar=("NX", "NY", "M", "SEED"))
    src.add_argument("--exhaustive", nargs=2, type=int, metavar=("NX", "NY"))
    gen.set_defaults(func=cmd_gen)

    rp = sub.add_parser("report", help="run the acceptance checks and write report.json plus figures")
    rp.add_argument("--out", default="report")
    rp.add_argument("--random-dp", type=int, default=200)
    rp.add_argument("--random-reduction", type=int, default=500)
    rp.set_defaults(func=cmd_report)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_YES if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except Exception:  # anything else is a bug; still honour the exit-code contract
        traceback.print_exc()
        print("error: internal failure", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
