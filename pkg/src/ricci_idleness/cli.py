"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 usage error, 3 I/O or parse error.
All rationals in JSON are ``"num/den"`` strings.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .exactnum import render
from .graphkit import (
    EdgeListParseError,
    Graph,
    GraphError,
    cartesian_product,
    from_spec,
    girth,
    read_edge_list,
    write_edge_list,
)
from .idleness import (
    EdgeReport,
    IdlenessFunction,
    canonical_orientation,
    default_grid,
    edge_report,
    idleness_function,
    oracle_suite,
    product_idleness,
    scan,
)

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


# -- graph sources ------------------------------------------------------------

def load_graph(args) -> Tuple[Graph, str]:
    if args.file is not None:
        try:
            return read_edge_list(args.file), str(args.file)
        except EdgeListParseError as exc:
            raise InputError(f"malformed edge list {args.file}: {exc}") from None
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc.strerror or exc}") from None
    return _graph_from_spec(args.graph), args.graph


def _graph_from_spec(spec: str) -> Graph:
    try:
        return from_spec(spec)
    except GraphError as exc:
        raise UsageError(f"invalid graph spec {spec!r}: {exc}") from None


def _edge(g: Graph, pair: Sequence[int]) -> Tuple[int, int]:
    u, v = pair
    try:
        canonical_orientation(g, u, v)
    except GraphError:
        raise UsageError(f"({u},{v}) is not an edge of the graph") from None
    return min(u, v), max(u, v)


# -- JSON rendering -----------------------------------------------------------

def function_json(fn: IdlenessFunction) -> Dict:
    return {
        "pieces": [
            {"from": render(q.lo), "to": render(q.hi), "slope": render(q.line.slope), "intercept": render(q.line.intercept)}
            for q in fn.pieces
        ],
        "breakpoints": [render(b) for b in fn.breakpoints],
    }


def edge_json(r: EdgeReport) -> Dict:
    fn = r.idleness
    x, y = fn.edge
    out = {
        "u": min(x, y),
        "v": max(x, y),
        "x": x,
        "y": y,
        "dx": fn.d_x,
        "dy": fn.d_y,
        "c": [render(cj) for cj in fn.c],
    }
    out.update(function_json(fn))
    out.update(
        {
            "kappa0": render(r.kappa0),
            "kappa": render(r.kappa_lly),
            "bone_idle": r.bone_idle,
            "three_piece": r.three_piece,
            "checks": dict(r.theorem_checks),
        }
    )
    return out


def graph_json(g: Graph, source: str) -> Dict:
    return {
        "source": source,
        "vertex_count": g.vertex_count,
        "edge_count": g.edge_count,
        "regular_degree": g.regular_degree(),
        "girth": girth(g),
    }


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    try:
        output.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot write {output}: {exc.strerror or exc}") from None


def _edges_csv(reports: Sequence[EdgeReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["u", "v", "dx", "dy", "c", "breakpoints", "kappa0", "kappa", "bone_idle", "checks_pass"])
    for r in reports:
        fn = r.idleness
        w.writerow([
            min(fn.edge), max(fn.edge), fn.d_x, fn.d_y,
            " ".join(map(str, fn.c)), " ".join(render(b) for b in fn.breakpoints),
            render(r.kappa0), render(r.kappa_lly), str(r.bone_idle).lower(), str(r.checks_pass).lower(),
        ])
    return buf.getvalue()


# -- subcommands --------------------------------------------------------------

def cmd_edge(args) -> int:
    g, source = load_graph(args)
    u, v = _edge(g, args.edge)
    r = edge_report(g, u, v)
    if args.format == "csv":
        emit(_edges_csv([r]), args.output)
    else:
        emit(dumps({"graph": graph_json(g, source), "edges": [edge_json(r)]}), args.output)
    return EXIT_OK if r.checks_pass else EXIT_CHECK


def cmd_scan(args) -> int:
    g, source = load_graph(args)
    reports, summary = scan(g)
    if args.format == "csv":
        emit(_edges_csv(reports), args.output)
    else:
        doc = {
            "graph": graph_json(g, source),
            "edges": [edge_json(r) for r in reports],
            "summary": {
                "edge_count": summary.edge_count,
                "bone_idle": summary.bone_idle,
                "three_piece_edges": [[min(r.idleness.edge), max(r.idleness.edge)] for r in reports if r.three_piece],
                "open_question_hits": [list(e) for e in summary.open_question_hits],
                "girth": summary.girth,
                "regular_degree": summary.regular_degree,
                "checks_pass": summary.checks_pass,
            },
        }
        emit(dumps(doc), args.output)
    return EXIT_OK if summary.checks_pass else EXIT_CHECK


def _product_classes(g: Graph, h: Graph, d_g: int, d_h: int, swap: bool) -> List[Dict]:
    """Compare the product formula with direct computation for every edge of ``g``.

    With ``swap`` the roles are reversed: ``g`` is the second factor.
    """
    prod = cartesian_product(h, g) if swap else cartesian_product(g, h)
    ng, nh = g.vertex_count, h.vertex_count
    out = []
    for a, b in g.edges():
        expected = product_idleness(idleness_function(g, a, b), d_g, d_h)
        bad = []
        for y in range(nh):
            e = (y * ng + a, y * ng + b) if swap else (a * nh + y, b * nh + y)
            if not idleness_function(prod, *e).same_function(expected):
                bad.append(y)
        row = {"factor": "H" if swap else "G", "edge": [a, b], "copies": nh, "mismatched_copies": bad}
        row.update(function_json(expected))
        row["pass"] = not bad
        out.append(row)
    return out


def cmd_product_check(args) -> int:
    g, h = _graph_from_spec(args.g), _graph_from_spec(args.h)
    d_g, d_h = g.regular_degree(), h.regular_degree()
    if not d_g or not d_h:
        raise UsageError("product-check needs two regular graphs of positive degree")
    classes = _product_classes(g, h, d_g, d_h, swap=False) + _product_classes(h, g, d_h, d_g, swap=True)
    ok = all(c["pass"] for c in classes)
    doc = {"g": args.g, "h": args.h, "dg": d_g, "dh": d_h, "classes": classes, "pass": ok}
    emit(dumps(doc), args.output)
    return EXIT_OK if ok else EXIT_CHECK


def cmd_verify(args) -> int:
    g, source = load_graph(args)
    edges = [_edge(g, args.edge)] if args.edge else g.edges()
    rows = []
    ok = True
    for u, v in edges:
        r = edge_report(g, u, v)
        fn = r.idleness
        grid = default_grid(fn, args.grid)
        suite = oracle_suite(g, u, v, grid, fn)
        edge_ok = suite.passed and r.checks_pass
        ok = ok and edge_ok
        rows.append({
            "u": u,
            "v": v,
            "grid_points": len(grid),
            "structure": dict(r.theorem_checks),
            "oracle": dict(suite.checks),
            "failures": [[name, None if p is None else render(p)] for name, p in suite.failures],
            "pass": edge_ok,
        })
    doc = {"graph": graph_json(g, source), "grid_density": args.grid, "edges": rows, "pass": ok}
    emit(dumps(doc), args.output)
    return EXIT_OK if ok else EXIT_CHECK


def sample_rows(fn: IdlenessFunction, density: int) -> List[Tuple[Fraction, Fraction, int]]:
    ps = sorted({Fraction(k, density) for k in range(density + 1)} | set(fn.breakpoints))
    return [(p, fn(p), fn.piece_index(p)) for p in ps]


def cmd_sample(args) -> int:
    g, _ = load_graph(args)
    u, v = _edge(g, args.edge)
    rows = sample_rows(idleness_function(g, u, v), args.density)
    if args.format == "json":
        doc = [{"p": render(p), "kappa": render(k), "piece_index": i} for p, k, i in rows]
        emit(dumps(doc), args.output)
        return EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p_exact", "p_decimal", "kappa_exact", "kappa_decimal", "piece_index"])
    for p, k, i in rows:
        w.writerow([render(p), repr(float(p)), render(k), repr(float(k)), i])
    emit(buf.getvalue(), args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    g = _graph_from_spec(args.graph)
    try:
        write_edge_list(g, args.output)
    except OSError as exc:
        raise InputError(f"cannot write {args.output}: {exc.strerror or exc}") from None
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ricci-idleness",
        description="Exact Ollivier-Ricci idleness functions of graph edges.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def source(p, edge_required: bool = False, edge_optional: bool = False):
        grp = p.add_mutually_exclusive_group(required=True)
        grp.add_argument("--graph", metavar="SPEC", help="generator spec, e.g. cycle:5, petersen, product:cycle:3,cycle:4")
        grp.add_argument("--file", type=Path, metavar="PATH", help="edge-list file")
        if edge_required or edge_optional:
            p.add_argument("--edge", nargs=2, type=int, metavar=("U", "V"), required=edge_required)
        p.add_argument("-o", "--output", type=Path, metavar="PATH", help="write here instead of stdout")

    p = sub.add_parser("edge", help="idleness report for one edge")
    source(p, edge_required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_edge)

    p = sub.add_parser("scan", help="reports for every edge plus a graph summary")
    source(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("product-check", help="compare the product formula with direct computation")
    p.add_argument("--g", required=True, metavar="SPEC", help="first regular factor")
    p.add_argument("--h", required=True, metavar="SPEC", help="second regular factor")
    p.add_argument("-o", "--output", type=Path, metavar="PATH")
    p.set_defaults(func=cmd_product_check)

    p = sub.add_parser("verify", help="oracle equivalence and duality lemma suite")
    source(p, edge_optional=True)
    p.add_argument("--grid", type=_positive, default=12, metavar="N", help="check p = k/N plus breakpoints (default 12)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="(p, kappa_p) samples for plotting")
    source(p, edge_required=True)
    p.add_argument("--density", type=_positive, default=24, metavar="N", help="sample p = k/N (default 24)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("generate", help="write a generated graph as an edge list")
    p.add_argument("--graph", required=True, metavar="SPEC")
    p.add_argument("-o", "--output", required=True, type=Path, metavar="PATH")
    p.set_defaults(func=cmd_generate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
