"""Command-line pipeline: generate, candidates, solve, verify, render, bench.

Exit codes: 0 success (verify: separated), 1 verify found classes not
separated, 2 parse/validation error, 3 infeasible, 4 time limit hit (best
incumbent written), 5 internal verification failure.
"""
from __future__ import annotations

import argparse
import json
import statistics
import sys
import time
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import generators
from .arrangement import LabelConflict, build_arrangement
from .candidates import (
    ABOVE,
    BELOW,
    CandidateSegment,
    enumerate_bitangents,
    enumerate_sampled_tangents,
)
from .geometry import Point, Segment, format_coord, parse_coord
from .ilp import TimeLimit, build_model, solve
from .instance import Instance, ParseError, ValidationError, read_instance, write_instance
from .render import render_svg
from .verifier import InvalidBarrier, PointSides, verify_separation

DEFAULT_TIME_LIMIT = 3600.0

EXIT_OK = 0
EXIT_NOT_SEPARATED = 1
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_TIMEOUT = 4
EXIT_VERIFY_FAILED = 5


def _parse_mode(text: str):
    if text == "bitangent":
        return ("bitangent", None)
    if text.startswith("sampled:"):
        r = int(text.split(":", 1)[1])
        if r < 1:
            raise argparse.ArgumentTypeError("resolution must be >= 1")
        return ("sampled", r)
    raise argparse.ArgumentTypeError(f"unknown mode {text!r}")


def _enumerate(inst: Instance, mode) -> List[CandidateSegment]:
    if mode[0] == "bitangent":
        return enumerate_bitangents(inst)
    return enumerate_sampled_tangents(inst, mode[1])


def _coords(p: Point) -> list:
    return [format_coord(p.x), format_coord(p.y)]


def _point_from(doc, where: str) -> Point:
    try:
        return Point(parse_coord(doc[0]), parse_coord(doc[1]))
    except (ValueError, KeyError, IndexError, TypeError) as exc:
        raise ParseError(f"bad point in {where}: {exc}")


def _barrier_doc(cand: CandidateSegment) -> dict:
    return {
        "id": cand.id,
        "a": _coords(cand.geometry.a),
        "b": _coords(cand.geometry.b),
        "point_sides": [
            [_coords(p), "above" if side == ABOVE else "below"]
            for p, side in cand.point_sides
        ],
    }


def _read_barriers(doc) -> Tuple[List[Segment], PointSides]:
    if isinstance(doc, dict):
        doc = doc.get("barriers")
    if not isinstance(doc, list):
        raise ParseError("barriers file must be a JSON list or a solution file")
    segments: List[Segment] = []
    sides: PointSides = {}
    for i, rec in enumerate(doc):
        if not isinstance(rec, dict):
            raise ParseError(f"barrier {i} must be an object")
        a = _point_from(rec["a"], f"barrier {i}")
        b = _point_from(rec["b"], f"barrier {i}")
        segments.append(Segment(a, b))
        entries = []
        for pdoc, sidename in rec.get("point_sides", []):
            side = {"above": ABOVE, "below": BELOW}.get(sidename)
            if side is None:
                raise ParseError(f"barrier {i}: bad side {sidename!r}")
            entries.append((_point_from(pdoc, f"barrier {i}"), side))
        if entries:
            sides[i] = tuple(entries)
    return segments, sides


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load_instance(path: str) -> Instance:
    with open(path) as fh:
        return read_instance(fh.read())


def cmd_generate(args) -> int:
    obstacles = args.objects if args.obstacles is None else args.obstacles
    spec = generators.GenSpec(
        kind=args.kind, num_sets=args.sets, objects_per_set=args.objects,
        obstacles_per_set=obstacles, seed=args.seed)
    try:
        inst = generators.generate(spec)
    except generators.GenerationFailed as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_PARSE
    _write(args.output, write_instance(inst))
    num_objects = sum(len(s) for s in inst.sets)
    print(f"generated {args.kind}: k={inst.k}, {args.objects} objects/set "
          f"({num_objects} total), {len(inst.obstacles)} obstacles, seed={args.seed}",
          file=sys.stderr)
    return EXIT_OK


def cmd_candidates(args) -> int:
    inst = _load_instance(args.instance)
    cands = _enumerate(inst, args.mode)
    doc = [_barrier_doc(c) for c in cands]
    _write(args.output, json.dumps(doc, indent=1) + "\n")
    print(f"{len(cands)} candidates", file=sys.stderr)
    return EXIT_OK


def _solution_doc(status: str, selected: Sequence[CandidateSegment],
                  objective, num_candidates: int, num_cells: int) -> str:
    doc = {
        "status": status,
        "objective": objective,
        "num_candidates": num_candidates,
        "num_cells": num_cells,
        "selected": [c.id for c in selected],
        "barriers": [_barrier_doc(c) for c in selected],
    }
    return json.dumps(doc, indent=1) + "\n"


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    t0 = time.monotonic()
    cands = _enumerate(inst, args.mode)
    try:
        arr = build_arrangement(inst, cands)
        model = build_model(arr, inst.k)
    except LabelConflict as exc:
        # objects of different sets share a cell that no candidate splits
        _write(args.output, _solution_doc("Infeasible", [], None,
                                          len(cands), None))
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    budget = None
    if args.time_limit is not None:
        budget = args.time_limit - (time.monotonic() - t0)
        if budget <= 0:
            budget = 0.001
    by_id = {c.id: c for c in cands}
    try:
        sol = solve(model, budget)
    except TimeLimit as exc:
        inc = exc.incumbent
        chosen = [by_id[i] for i in sorted(inc.selected)] if inc else []
        _write(args.output, _solution_doc(
            "TimeLimit", chosen, inc.objective_value if inc else None,
            len(cands), arr.num_cells))
        print("time limit reached; best incumbent written", file=sys.stderr)
        return EXIT_TIMEOUT
    elapsed = time.monotonic() - t0
    if sol.status == "Infeasible":
        _write(args.output, _solution_doc(
            "Infeasible", [], None, len(cands), arr.num_cells))
        print(f"infeasible with {len(cands)} candidates "
              f"({elapsed:.3f}s)", file=sys.stderr)
        return EXIT_INFEASIBLE
    chosen = [by_id[i] for i in sorted(sol.selected)]
    sides: PointSides = {i: c.point_sides for i, c in enumerate(chosen)
                         if c.point_sides}
    report = verify_separation(inst, [c.geometry for c in chosen], sides)
    if not report.ok:
        print(f"internal error: solution failed verification "
              f"(witness {report.witness})", file=sys.stderr)
        return EXIT_VERIFY_FAILED
    _write(args.output, _solution_doc(
        "Optimal", chosen, sol.objective_value, len(cands), arr.num_cells))
    print(f"optimal: {sol.objective_value} barriers, {len(cands)} candidates, "
          f"{arr.num_cells} cells, verified, {elapsed:.3f}s", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    with open(args.barriers) as fh:
        barriers, sides = _read_barriers(json.load(fh))
    report = verify_separation(inst, barriers, sides)
    if report.ok:
        print("separated: yes")
        return EXIT_OK
    a, b, path = report.witness
    print("separated: no")
    print(f"witness: set {a[0]} object {a[1]} reaches set {b[0]} object {b[1]} "
          f"through {len(path)} region(s)")
    return EXIT_NOT_SEPARATED


def cmd_render(args) -> int:
    inst = _load_instance(args.instance)
    barriers: List[Segment] = []
    candidates: List[Segment] = []
    if args.solution:
        with open(args.solution) as fh:
            barriers, _ = _read_barriers(json.load(fh))
    if args.candidates:
        with open(args.candidates) as fh:
            candidates, _ = _read_barriers(json.load(fh))
    _write(args.output, render_svg(inst, barriers, candidates))
    return EXIT_OK


def cmd_bench(args) -> int:
    sets_values = [int(s) for s in args.sets.split(",")]
    columns = list(range(1, args.objects + 1))
    rows = []
    for k in sets_values:
        cells = []
        for n in columns:
            times = []
            timed_out = False
            for trial in range(args.trials):
                seed = args.seed + trial
                try:
                    inst = generators.generate(generators.GenSpec(
                        kind=args.kind, num_sets=k, objects_per_set=n,
                        obstacles_per_set=n, seed=seed))
                except generators.GenerationFailed:
                    timed_out = True
                    break
                t0 = time.monotonic()
                cands = _enumerate(inst, args.mode)
                arr = build_arrangement(inst, cands)
                model = build_model(arr, inst.k)
                remaining = args.time_limit - (time.monotonic() - t0)
                try:
                    solve(model, max(remaining, 0.001))
                except TimeLimit:
                    timed_out = True
                    break
                times.append(time.monotonic() - t0)
                if times[-1] > args.time_limit:
                    timed_out = True
                    break
            cells.append(None if timed_out else statistics.mean(times))
        rows.append((k, cells))

    header = ["sets\\objects"] + [str(n) for n in columns]
    widths = [max(12, len(header[0]))] + [10] * len(columns)
    def fmt_row(items):
        return "  ".join(str(x).rjust(w) for x, w in zip(items, widths))
    lines = [fmt_row(header)]
    csv_lines = ["sets,objects,trials,mean_seconds"]
    for k, cells in rows:
        display = [k]
        for n, val in zip(columns, cells):
            display.append("-" if val is None else f"{val:.3f}")
            csv_lines.append(
                f"{k},{n},{args.trials},{'-' if val is None else f'{val:.3f}'}")
        lines.append(fmt_row(display))
    table = "\n".join(lines) + "\n"
    sys.stdout.write(table)
    if args.output:
        _write(args.output, "\n".join(csv_lines) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barriers",
        description="minimum-cardinality straight-line barriers separating "
                    "object sets in a polygonal workspace")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a random instance")
    g.add_argument("--kind", required=True, choices=[
        generators.RANDOM_POINTS, generators.TSP_POLYGONS,
        generators.GRID_SQUARES])
    g.add_argument("--sets", type=int, required=True)
    g.add_argument("--objects", type=int, required=True)
    g.add_argument("--obstacles", type=int, default=None,
                   help="obstacles per set (default: same as --objects)")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output", default=None)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("candidates", help="enumerate candidate barriers")
    c.add_argument("instance")
    c.add_argument("--mode", type=_parse_mode, default=("bitangent", None))
    c.add_argument("-o", "--output", default=None)
    c.set_defaults(func=cmd_candidates)

    s = sub.add_parser("solve", help="compute a minimum barrier set")
    s.add_argument("instance")
    s.add_argument("--mode", type=_parse_mode, default=("bitangent", None))
    s.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    s.add_argument("-o", "--output", default=None)
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a barrier set separates all sets")
    v.add_argument("instance")
    v.add_argument("barriers", help="solution file or JSON list of segments")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("render", help="render instance and solution to SVG")
    r.add_argument("instance")
    r.add_argument("--solution", default=None)
    r.add_argument("--candidates", default=None)
    r.add_argument("-o", "--output", default=None)
    r.set_defaults(func=cmd_render)

    b = sub.add_parser("bench", help="timing table over generated instances")
    b.add_argument("--kind", required=True, choices=[
        generators.RANDOM_POINTS, generators.TSP_POLYGONS,
        generators.GRID_SQUARES])
    b.add_argument("--sets", default="2", help="comma-separated set counts")
    b.add_argument("--objects", type=int, default=4, help="max objects per set")
    b.add_argument("--trials", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--mode", type=_parse_mode, default=("bitangent", None))
    b.add_argument("--time-limit", type=float, default=DEFAULT_TIME_LIMIT)
    b.add_argument("-o", "--output", default=None)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, InvalidBarrier, FileNotFoundError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
