"""Candidate barrier enumeration.

Exact mode enumerates bitangent segments through pairs of anchor vertices
(point objects, point obstacles and polygon vertices of objects and
obstacles).  Resolution mode adds radially sampled single-tangent segments
through every anchor.  Every candidate is extended maximally through free
space, so its endpoints lie on the workspace or on shape boundaries.

A candidate whose supporting line passes through a point object carries an
explicit side assignment for that point (the paper's four-cases rule for a
pair of points); side assignments are what distinguish candidates sharing
the same geometry.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import List, Optional, Tuple

from .geometry import (
    COLLINEAR,
    INSIDE,
    LEFT,
    OUTSIDE,
    RIGHT,
    Point,
    Polygon,
    Segment,
    cross,
    dot,
    orientation,
    point_in_polygon,
)
from .instance import Instance

# side of the supporting line (relative to its canonical direction)
ON = 0
ABOVE = 1
BELOW = 2

BITANGENT = "bitangent"
SAMPLED = "sampled"


@dataclass(frozen=True)
class Tangency:
    anchor: Point
    side: int  # ON / ABOVE / BELOW


@dataclass(frozen=True)
class CandidateSegment:
    id: int
    geometry: Segment
    line: Tuple[Point, Point]  # two exact points spanning the supporting line
    tangencies: Tuple[Tangency, ...]
    source: tuple  # (BITANGENT,) or (SAMPLED, resolution, direction_index)
    point_sides: Tuple[Tuple[Point, int], ...]  # side of every point object on geometry

    def side_of(self, p: Point) -> Optional[int]:
        for q, side in self.point_sides:
            if q == p:
                return side
        return None


def canonical_direction(d: Point) -> Point:
    """Flip d if needed so it points into the upper half plane (or +x)."""
    if d.y < 0 or (d.y == 0 and d.x < 0):
        return Point(-d.x, -d.y)
    return d


def _side_of_point(line_origin: Point, canon_dir: Point, p: Point) -> int:
    c = cross(line_origin, line_origin + canon_dir, p)
    if c > 0:
        return ABOVE
    if c < 0:
        return BELOW
    return ON


class _Context:
    """Per-instance precomputation shared by the enumeration loops."""

    def __init__(self, inst: Instance, include_workspace_vertices: bool = False):
        self.inst = inst
        self.workspace = inst.workspace
        self.polygons = []
        self.point_objects = []  # (set_idx, obj_idx, Point)
        self.anchors = []  # (Point, kind, payload)
        for label, obj in inst.all_shapes():
            if obj.is_point:
                if label[0] == "obstacle":
                    self.anchors.append((obj.shape, "pt_obs", None))
                else:
                    self.anchors.append((obj.shape, "pt_obj", label))
                    self.point_objects.append((label[0], label[1], obj.shape))
            else:
                poly = obj.shape
                self.polygons.append(poly)
                n = len(poly.vertices)
                for i, v in enumerate(poly.vertices):
                    prev = poly.vertices[(i - 1) % n]
                    nxt = poly.vertices[(i + 1) % n]
                    self.anchors.append((v, "vertex", (prev, nxt)))
        if include_workspace_vertices:
            for v in inst.workspace.vertices:
                self.anchors.append((v, "ws_vertex", None))
        self.edges = list(inst.workspace.edges())
        for poly in self.polygons:
            self.edges.extend(poly.edges())
        self._bboxes = [
            (
                min(v.x for v in poly.vertices), max(v.x for v in poly.vertices),
                min(v.y for v in poly.vertices), max(v.y for v in poly.vertices),
                poly,
            )
            for poly in self.polygons
        ]

    def interior_polygons_near(self, p: Point):
        for x0, x1, y0, y1, poly in self._bboxes:
            if x0 < p.x < x1 and y0 < p.y < y1:
                yield poly

    def is_free(self, p: Point) -> bool:
        """p in the closed workspace and in no shape's open interior."""
        if point_in_polygon(p, self.workspace) == OUTSIDE:
            return False
        for poly in self.interior_polygons_near(p):
            if point_in_polygon(p, poly) == INSIDE:
                return False
        return True


def _line_cuts(ctx: _Context, origin: Point, d: Point) -> List[Fraction]:
    """Parameters t where the line origin + t*d meets any edge."""
    dd = dot(d, d)
    ts = []
    for e in ctx.edges:
        ev = e.b - e.a
        denom = d.x * ev.y - d.y * ev.x
        ap = e.a - origin
        if denom == 0:
            if ap.x * d.y - ap.y * d.x == 0:  # collinear edge
                ts.append(dot(ap, d) / dd)
                ts.append(dot(e.b - origin, d) / dd)
            continue
        u = (ap.x * d.y - ap.y * d.x) / denom
        if 0 <= u <= 1:
            ts.append((ap.x * ev.y - ap.y * ev.x) / denom)
    return sorted(set(ts))


def _free_run(ctx: _Context, origin: Point, d: Point,
              required: List[Fraction]) -> Optional[Tuple[Fraction, Fraction]]:
    """Maximal closed parameter run whose open intervals are all in free
    space and which contains every required parameter; None if absent."""
    cuts = _line_cuts(ctx, origin, d)
    if len(cuts) < 2:
        return None
    t_lo, t_hi = min(required), max(required)
    if t_lo < cuts[0] or t_hi > cuts[-1]:
        return None

    def interval_free(i: int) -> bool:
        mid = (cuts[i] + cuts[i + 1]) / 2
        return ctx.is_free(origin + d.scaled(mid))

    # indexes of elementary intervals overlapping [t_lo, t_hi]
    import bisect
    start = max(bisect.bisect_right(cuts, t_lo) - 1, 0)
    end = min(bisect.bisect_left(cuts, t_hi), len(cuts) - 1)
    if start >= end:
        # required parameters coincide at a single cut; grow from a free side
        if not (0 <= start < len(cuts) - 1):
            return None
        end = start + 1
        if not interval_free(start):
            if start == 0 or not interval_free(start - 1):
                return None
            start, end = start - 1, start
    else:
        for i in range(start, end):
            if not interval_free(i):
                return None
    lo, hi = start, end
    while lo > 0 and interval_free(lo - 1):
        lo -= 1
    while hi < len(cuts) - 1 and interval_free(hi):
        hi += 1
    if cuts[lo] == cuts[hi]:
        return None
    return cuts[lo], cuts[hi]


def _param(origin: Point, d: Point, p: Point) -> Fraction:
    return dot(p - origin, d) / dot(d, d)


def clip_to_free_space(line: Tuple[Point, Point], through: Point,
                       inst: Instance) -> Optional[Segment]:
    """Maximal free sub-segment of the line containing `through`."""
    ctx = _Context(inst)
    origin, other = line
    d = other - origin
    run = _free_run(ctx, origin, d, [_param(origin, d, through)])
    if run is None:
        return None
    a = origin + d.scaled(run[0])
    b = origin + d.scaled(run[1])
    if a == b:
        return None
    return Segment(a, b)


def _vertex_sides(origin: Point, canon_dir: Point, prev: Point, nxt: Point) -> List[int]:
    """Admissible tangency sides at a polygon vertex on the line, i.e. sides
    whose closed half-plane contains both incident edges."""
    p1 = origin + canon_dir
    o_prev = orientation(origin, p1, prev)
    o_next = orientation(origin, p1, nxt)
    sides = []
    if o_prev in (LEFT, COLLINEAR) and o_next in (LEFT, COLLINEAR):
        sides.append(ABOVE)
    if o_prev in (RIGHT, COLLINEAR) and o_next in (RIGHT, COLLINEAR):
        sides.append(BELOW)
    return sides


class _Collector:
    def __init__(self, ctx: _Context):
        self.ctx = ctx
        self.seen = set()
        self.records = []  # (geometry, line, tangencies, source, point_sides)

    def emit(self, origin: Point, canon_dir: Point,
             run: Tuple[Fraction, Fraction],
             fixed: List[Tuple[Point, int, str]],
             source: tuple) -> None:
        """Emit every admissible side combination for one clipped geometry.

        fixed: (anchor, side, kind) for the anchors that produced the line;
        point objects on the geometry beyond those get both side choices.
        """
        a = origin + canon_dir.scaled(run[0])
        b = origin + canon_dir.scaled(run[1])
        geometry = Segment(a, b).canonical()
        fixed_pts = {p.key() for p, _, _ in fixed}
        extras = []
        for _, _, p in self.ctx.point_objects:
            if p.key() in fixed_pts:
                continue
            if _side_of_point(origin, canon_dir, p) == ON:
                t = _param(origin, canon_dir, p)
                if run[0] <= t <= run[1]:
                    extras.append(p)
        extras.sort(key=lambda p: p.key())
        for combo in product((ABOVE, BELOW), repeat=len(extras)):
            tangencies = tuple(Tangency(p, side) for p, side, _ in fixed)
            point_sides = [
                (p, side) for p, side, kind in fixed if kind == "pt_obj"
            ] + list(zip(extras, combo))
            point_sides.sort(key=lambda ps: ps[0].key())
            key = (geometry.key(), tuple((p.key(), s) for p, s in point_sides))
            if key in self.seen:
                continue
            self.seen.add(key)
            self.records.append(
                (geometry, (origin, origin + canon_dir), tangencies, source,
                 tuple(point_sides)))

    def finish(self) -> List[CandidateSegment]:
        return [
            CandidateSegment(i, geom, line, tang, source, psides)
            for i, (geom, line, tang, source, psides) in enumerate(self.records)
        ]


def _anchor_side_options(anchor, origin: Point, canon_dir: Point) -> List[Tuple[int, str]]:
    point, kind, payload = anchor
    if kind == "pt_obj":
        return [(ABOVE, "pt_obj"), (BELOW, "pt_obj")]
    if kind in ("pt_obs", "ws_vertex"):
        return [(ON, kind)]
    sides = _vertex_sides(origin, canon_dir, payload[0], payload[1])
    return [(s, "vertex") for s in sides]


def enumerate_bitangents(inst: Instance,
                         include_workspace_vertices: bool = False
                         ) -> List[CandidateSegment]:
    """All maximal bitangent candidates, deterministically ordered."""
    ctx = _Context(inst, include_workspace_vertices)
    collector = _Collector(ctx)
    anchors = ctx.anchors
    for i in range(len(anchors)):
        for j in range(i + 1, len(anchors)):
            pa, _, _ = anchors[i]
            pb, _, _ = anchors[j]
            if pa == pb:
                continue
            d = canonical_direction(pb - pa)
            origin = pa
            opts_a = _anchor_side_options(anchors[i], origin, d)
            if not opts_a:
                continue
            opts_b = _anchor_side_options(anchors[j], origin, d)
            if not opts_b:
                continue
            run = _free_run(ctx, origin, d,
                            [Fraction(0), _param(origin, d, pb)])
            if run is None or run[0] == run[1]:
                continue
            for (sa, ka), (sb, kb) in product(opts_a, opts_b):
                collector.emit(origin, d, run,
                               [(pa, sa, ka), (pb, sb, kb)],
                               (BITANGENT,))
    return collector.finish()


def _sample_directions(resolution: int) -> List[Point]:
    """Rational directions covering the half circle: the tangent-half-angle
    image of u = (2j - r)/r for j = 0..r-1."""
    dirs = []
    for j in range(resolution):
        u = Fraction(2 * j - resolution, resolution)
        d = Point(1 - u * u, 2 * u)
        if d.x == 0 and d.y == 0:  # u = 1 never occurs for j < r; guard anyway
            continue
        dirs.append(canonical_direction(d))
    return dirs


def enumerate_sampled_tangents(inst: Instance, resolution: int,
                               include_workspace_vertices: bool = False
                               ) -> List[CandidateSegment]:
    """Bitangents plus radially sampled single tangents through every
    object/obstacle vertex (resolution directions over the half circle)."""
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    ctx = _Context(inst, include_workspace_vertices)
    collector = _Collector(ctx)
    # bitangents first: the sampled set is a superset by construction
    for cand in enumerate_bitangents(inst, include_workspace_vertices):
        key = (cand.geometry.key(),
               tuple((p.key(), s) for p, s in cand.point_sides))
        if key not in collector.seen:
            collector.seen.add(key)
            collector.records.append(
                (cand.geometry, cand.line, cand.tangencies, cand.source,
                 cand.point_sides))
    dirs = _sample_directions(resolution)
    for anchor in ctx.anchors:
        point, kind, _ = anchor
        if kind == "ws_vertex":
            continue
        for j, d in enumerate(dirs):
            opts = _anchor_side_options(anchor, point, d)
            if not opts:
                continue
            run = _free_run(ctx, point, d, [Fraction(0)])
            if run is None or run[0] == run[1]:
                continue
            for side, k in opts:
                collector.emit(point, d, run, [(point, side, k)],
                               (SAMPLED, resolution, j))
    return collector.finish()
