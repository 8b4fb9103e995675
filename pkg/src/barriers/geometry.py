"""Exact 2D primitives: points, segments, polygons and predicates.

All coordinates are ``fractions.Fraction`` values, so every predicate in
this module is exact; there is no epsilon anywhere in the pipeline.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

Coord = Fraction

LEFT = 1
COLLINEAR = 0
RIGHT = -1

INSIDE = 1
BOUNDARY = 0
OUTSIDE = -1


def parse_coord(text: str) -> Coord:
    """Parse a decimal or ``p/q`` coordinate string exactly."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad coordinate {text!r}: {exc}") from None


def format_coord(value: Coord) -> str:
    """Render a coordinate canonically: decimal if terminating, else p/q."""
    den = value.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    # smallest power of ten divisible by the denominator
    e = 0
    while (10 ** e) % value.denominator != 0:
        e += 1
    if e == 0:
        return str(value.numerator)
    scaled = value.numerator * (10 ** e) // value.denominator
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(e + 1, "0")
    return f"{sign}{digits[:-e]}.{digits[-e:]}"


@dataclass(frozen=True, slots=True)
class Point:
    x: Coord
    y: Coord

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def scaled(self, f: Coord) -> "Point":
        return Point(self.x * f, self.y * f)

    def key(self):
        return (self.x, self.y)


def pt(x, y) -> Point:
    """Shorthand constructor converting ints/strings to exact coords."""
    return Point(Fraction(x), Fraction(y))


@dataclass(frozen=True, slots=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate segment")

    def canonical(self) -> "Segment":
        return self if self.a.key() <= self.b.key() else Segment(self.b, self.a)

    def key(self):
        s = self.canonical()
        return (s.a.key(), s.b.key())


def cross(o: Point, a: Point, b: Point) -> Coord:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def orientation(p: Point, q: Point, r: Point) -> int:
    """Exact sign of the cross product (q-p) x (r-p)."""
    c = cross(p, q, r)
    if c > 0:
        return LEFT
    if c < 0:
        return RIGHT
    return COLLINEAR


def dot(a: Point, b: Point) -> Coord:
    return a.x * b.x + a.y * b.y


def on_segment(p: Point, s: Segment) -> bool:
    """True iff p lies on the closed segment s."""
    if orientation(s.a, s.b, p) != COLLINEAR:
        return False
    d = s.b - s.a
    t = dot(p - s.a, d)
    return 0 <= t <= dot(d, d)


def segment_intersection(s1: Segment, s2: Segment):
    """Exact intersection of two closed segments.

    Returns None (empty), a Point, or a Segment for collinear overlaps of
    positive length.
    """
    p, r = s1.a, s1.b - s1.a
    q, s = s2.a, s2.b - s2.a
    rxs = r.x * s.y - r.y * s.x
    qp = q - p
    qpxr = qp.x * r.y - qp.y * r.x
    if rxs == 0:
        if qpxr != 0:
            return None  # parallel, non-collinear
        # collinear: project s2 endpoints on s1's parameter line
        rr = dot(r, r)
        t0 = dot(qp, r)
        t1 = t0 + dot(s, r)
        lo, hi = min(t0, t1), max(t0, t1)
        lo = max(lo, Fraction(0))
        hi = min(hi, rr)
        if lo > hi:
            return None
        pa = p + r.scaled(Fraction(lo, 1) / rr)
        pb = p + r.scaled(Fraction(hi, 1) / rr)
        if pa == pb:
            return pa
        return Segment(pa, pb)
    t = (qp.x * s.y - qp.y * s.x) / rxs
    u = qpxr / rxs
    if 0 <= t <= 1 and 0 <= u <= 1:
        return p + r.scaled(t)
    return None


@dataclass(frozen=True)
class Polygon:
    vertices: tuple

    def __init__(self, vertices: Iterable[Point]):
        verts = list(vertices)
        verts = _strip_collinear(verts)
        if len(verts) < 3:
            raise ValueError("polygon needs >= 3 non-collinear vertices")
        if _signed_area2(verts) < 0:
            verts.reverse()
        # canonical start vertex for determinism
        start = min(range(len(verts)), key=lambda i: verts[i].key())
        verts = verts[start:] + verts[:start]
        if not _is_simple(verts):
            raise ValueError("polygon is not simple")
        object.__setattr__(self, "vertices", tuple(verts))

    def edges(self) -> list:
        v = self.vertices
        return [Segment(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def area2(self) -> Coord:
        return _signed_area2(list(self.vertices))


def _strip_collinear(verts: Sequence[Point]) -> list:
    out = list(verts)
    if out and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        n = len(out)
        for i in range(n):
            a, b, c = out[(i - 1) % n], out[i], out[(i + 1) % n]
            if b == a or orientation(a, b, c) == COLLINEAR:
                out.pop(i)
                changed = True
                break
    return out


def _signed_area2(verts: Sequence[Point]) -> Coord:
    total = Fraction(0)
    n = len(verts)
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        total += a.x * b.y - b.x * a.y
    return total


def _is_simple(verts: Sequence[Point]) -> bool:
    n = len(verts)
    segs = [Segment(verts[i], verts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            inter = segment_intersection(segs[i], segs[j])
            if inter is None:
                continue
            if isinstance(inter, Segment):
                return False
            adjacent = j == i + 1 or (i == 0 and j == n - 1)
            if adjacent:
                # adjacent edges may only share their common endpoint
                common = segs[i].b if j == i + 1 else segs[i].a
                if inter != common:
                    return False
            else:
                return False
    return True


def point_in_polygon(p: Point, poly: Polygon) -> int:
    """Exact classification: INSIDE, BOUNDARY or OUTSIDE.

    Crossing-number with the half-open edge rule; endpoints on the scan
    line are counted once.
    """
    for e in poly.edges():
        if on_segment(p, e):
            return BOUNDARY
    inside = False
    for e in poly.edges():
        a, b = e.a, e.b
        if (a.y > p.y) != (b.y > p.y):
            # x coordinate of the edge at height p.y
            xs = a.x + (b.x - a.x) * (p.y - a.y) / (b.y - a.y)
            if xs > p.x:
                inside = not inside
    return INSIDE if inside else OUTSIDE


def segment_intersects_interior(s: Segment, poly: Polygon) -> bool:
    """True iff the open segment s meets the open interior of poly."""
    cuts = [Fraction(0), Fraction(1)]
    d = s.b - s.a
    dd = dot(d, d)
    for e in poly.edges():
        inter = segment_intersection(s, e)
        if inter is None:
            continue
        if isinstance(inter, Segment):
            cuts.append(dot(inter.a - s.a, d) / dd)
            cuts.append(dot(inter.b - s.a, d) / dd)
        else:
            cuts.append(dot(inter - s.a, d) / dd)
    cuts = sorted(set(cuts))
    for t0, t1 in zip(cuts, cuts[1:]):
        mid = s.a + d.scaled((t0 + t1) / 2)
        if point_in_polygon(mid, poly) == INSIDE:
            return True
    return False


# --- direction / displacement helpers -------------------------------------
#
# Several modules need an exact "nudge a point off a line" operation: pick a
# rational direction strictly inside an open cone of half-plane constraints,
# then move far enough to stay clear of every other segment.


def open_cone_direction(constraints) -> Optional[Point]:
    """Pick a rational direction d with sign(cross(line_dir, d)) == want
    for every (line_dir, want) constraint; None if the open cone is empty.

    want is LEFT or RIGHT.
    """
    if not constraints:
        return Point(Fraction(1), Fraction(0))

    def ok(d: Point) -> bool:
        if d.x == 0 and d.y == 0:
            return False
        for line_dir, want in constraints:
            c = line_dir.x * d.y - line_dir.y * d.x
            if (c > 0) != (want == LEFT) or c == 0:
                return False
        return True

    # candidate directions: boundary directions rotated, and sums of
    # angularly adjacent boundary directions
    bounds = []
    for line_dir, _ in constraints:
        bounds.append(line_dir)
        bounds.append(Point(-line_dir.x, -line_dir.y))
    perps = [Point(-b.y, b.x) for b in bounds]
    for d in perps:
        if ok(d):
            return d
    bounds_sorted = sorted(set((b.x, b.y) for b in bounds),
                           key=lambda t: _angle_sort_key(Point(t[0], t[1])))
    dirs = [Point(x, y) for x, y in bounds_sorted]
    n = len(dirs)
    for i in range(n):
        u, v = dirs[i], dirs[(i + 1) % n]
        d = Point(u.x + v.x, u.y + v.y)
        if ok(d):
            return d
        d = Point(-u.y - v.y, u.x + v.x)
        if ok(d):
            return d
    return None


def _angle_sort_key(d: Point):
    half = 0 if (d.y > 0 or (d.y == 0 and d.x > 0)) else 1
    # within a half turn, order by slope using cross product vs (1,0)/( -1,0)
    # encode via atan-free comparable tuple: (half, y/x-ish) using cross with
    # a fixed reference is not transitive; use exact ratio instead.
    if d.x != 0:
        slope = Fraction(d.y, d.x)
    else:
        slope = None
    if half == 0:
        if d.y == 0:
            return (0, 0, Fraction(0))
        if d.x > 0:
            return (0, 1, slope)
        if d.x == 0:
            return (0, 2, Fraction(0))
        return (0, 3, slope)
    else:
        if d.y == 0:
            return (1, 0, Fraction(0))
        if d.x < 0:
            return (1, 1, slope)
        if d.x == 0:
            return (1, 2, Fraction(0))
        return (1, 3, slope)


def safe_displacement(p: Point, d: Point, segments) -> Point:
    """Return p + eps*d with eps small enough that the open segment from p
    to the result crosses no segment in `segments` (except at p itself)."""
    t_min = None
    dd = dot(d, d)
    for s in segments:
        # ray p + t d vs segment s
        e = s.b - s.a
        denom = d.x * e.y - d.y * e.x
        ap = s.a - p
        if denom == 0:
            # parallel; collinear segments along the ray would start at some
            # positive t only if p outside them
            if ap.x * d.y - ap.y * d.x != 0:
                continue
            for q in (s.a, s.b):
                t = dot(q - p, d) / dd
                if t > 0 and (t_min is None or t < t_min):
                    t_min = t
            continue
        t = (ap.x * e.y - ap.y * e.x) / denom
        u = (ap.x * d.y - ap.y * d.x) / denom
        if t > 0 and 0 <= u <= 1 and (t_min is None or t < t_min):
            t_min = t
    eps = Fraction(1) if t_min is None else t_min / 2
    return p + d.scaled(eps)
