"""Independent separation checker and brute-force minimum oracle.

verify_separation rebuilds free-space connectivity from scratch using a
vertical slab decomposition, deliberately sharing no machinery with the
solver's cell arrangement: a shared bug would otherwise hide solver errors.
All coordinates are sheared by x' = x + lam*y with lam chosen so that no
input segment is vertical, which removes every slab-boundary degeneracy
while preserving connectivity, sidedness and containment exactly.

A barrier may pass through a point object (tangents do).  The optional
point_sides metadata assigns the object to one side of each such barrier;
the object then belongs to the free sectors around it compatible with every
assigned side, and to none when the assignments conflict.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .candidates import ABOVE, BELOW, CandidateSegment, canonical_direction
from .geometry import (
    INSIDE,
    OUTSIDE,
    Point,
    Polygon,
    Segment,
    cross,
    dot,
    on_segment,
    orientation,
    point_in_polygon,
    safe_displacement,
    segment_intersection,
    _angle_sort_key,
)
from .instance import Instance


class InvalidBarrier(ValueError):
    def __init__(self, index: int, reason: str):
        super().__init__(f"barrier {index}: {reason}")
        self.index = index


class TooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    # ((set a, object a), (set b, object b), region id path) on failure
    witness: Optional[Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, ...]]]


# PointSides maps barrier index -> ((point, ABOVE|BELOW), ...) in original
# coordinates; sides refer to the canonical direction of the barrier's line.
PointSides = Dict[int, Tuple[Tuple[Point, int], ...]]


def _shear_factor(segments: Sequence[Segment]) -> Fraction:
    """Smallest non-negative integer lam making every segment non-vertical
    under x' = x + lam*y."""
    bad = set()
    for s in segments:
        d = s.b - s.a
        if d.y != 0:
            bad.add(Fraction(-d.x, d.y))
    lam = Fraction(0)
    while lam in bad:
        lam += 1
    return lam


def _split_all(segments: List[Tuple[Segment, tuple]]):
    """Split segments at mutual intersections; returns elementary pieces
    (a, b, tags) with a.x < b.x, deduplicated with tags merged."""
    n = len(segments)
    cuts: List[set] = [set() for _ in range(n)]
    for i in range(n):
        cuts[i].add(segments[i][0].a.key())
        cuts[i].add(segments[i][0].b.key())
        for j in range(i + 1, n):
            inter = segment_intersection(segments[i][0], segments[j][0])
            if inter is None:
                continue
            pts = (inter.a, inter.b) if isinstance(inter, Segment) else (inter,)
            for p in pts:
                cuts[i].add(p.key())
                cuts[j].add(p.key())
    pieces: Dict[tuple, tuple] = {}
    for i, (seg, tag) in enumerate(segments):
        d = seg.b - seg.a
        dd = dot(d, d)
        pts = sorted((Point(x, y) for x, y in cuts[i]),
                     key=lambda p: dot(p - seg.a, d) / dd)
        for a, b in zip(pts, pts[1:]):
            if a == b:
                continue
            if a.x > b.x:
                a, b = b, a
            key = (a.key(), b.key())
            if key in pieces:
                pieces[key][2].add(tag)
            else:
                pieces[key] = (a, b, {tag})
    return list(pieces.values())


class _SlabDecomposition:
    """Trapezoid decomposition of the plane region covered by the input
    segments (assumed non-vertical), with free/blocked classification and
    union-find connectivity over free trapezoids."""

    def __init__(self, pieces, workspace: Polygon, solids: List[Polygon]):
        self.pieces = pieces
        xs = sorted({p[0].x for p in pieces} | {p[1].x for p in pieces})
        self.xs = xs
        # per slab: pieces crossing it, bottom-to-top
        self.slab_pieces: List[List[int]] = []
        self.trap: List[Tuple[int, int, int, int]] = []  # (slab, lo piece, hi piece, gap)
        self.trap_id: Dict[Tuple[int, int], int] = {}
        self.free: List[bool] = []
        for si in range(len(xs) - 1):
            x1, x2 = xs[si], xs[si + 1]
            xm = (x1 + x2) / 2
            idx = [i for i, (a, b, _) in enumerate(pieces)
                   if a.x <= x1 and b.x >= x2]
            idx.sort(key=lambda i: self._y_at(i, xm))
            self.slab_pieces.append(idx)
            for gap in range(len(idx) - 1):
                lo, hi = idx[gap], idx[gap + 1]
                ylo = self._y_at(lo, xm)
                yhi = self._y_at(hi, xm)
                if ylo == yhi:
                    continue
                mid = Point(xm, (ylo + yhi) / 2)
                tid = len(self.trap)
                self.trap.append((si, lo, hi, gap))
                self.trap_id[(si, gap)] = tid
                ok = point_in_polygon(mid, workspace) == INSIDE and not any(
                    point_in_polygon(mid, s) == INSIDE for s in solids)
                self.free.append(ok)
        self.parent = list(range(len(self.trap)))
        self.neighbors: Dict[int, List[int]] = {t: [] for t in range(len(self.trap))}
        self._connect()

    def _y_at(self, piece_idx: int, x: Fraction) -> Fraction:
        a, b, _ = self.pieces[piece_idx]
        return a.y + (b.y - a.y) * (x - a.x) / (b.x - a.x)

    def _find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def _union(self, a: int, b: int) -> None:
        ra, rb = self._find(a), self._find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def _connect(self) -> None:
        for si in range(len(self.xs) - 2):
            x = self.xs[si + 1]
            left = [(g, self.trap_id[(si, g)])
                    for g in range(len(self.slab_pieces[si]) - 1)
                    if (si, g) in self.trap_id and self.free[self.trap_id[(si, g)]]]
            right = [(g, self.trap_id[(si + 1, g)])
                     for g in range(len(self.slab_pieces[si + 1]) - 1)
                     if (si + 1, g) in self.trap_id
                     and self.free[self.trap_id[(si + 1, g)]]]
            for _, t1 in left:
                _, lo1, hi1, _ = self.trap[t1]
                a1, b1 = self._y_at(lo1, x), self._y_at(hi1, x)
                for _, t2 in right:
                    _, lo2, hi2, _ = self.trap[t2]
                    a2, b2 = self._y_at(lo2, x), self._y_at(hi2, x)
                    # positive-length overlap; touching at a point does not
                    # connect free regions
                    if min(b1, b2) > max(a1, a2):
                        self._union(t1, t2)
                        self.neighbors[t1].append(t2)
                        self.neighbors[t2].append(t1)

    def locate(self, p: Point) -> List[int]:
        """Free trapezoids whose closure contains p; p must not lie on any
        piece."""
        out = []
        for tid, (si, lo, hi, _) in enumerate(self.trap):
            if not self.free[tid]:
                continue
            if not (self.xs[si] <= p.x <= self.xs[si + 1]):
                continue
            if self._y_at(lo, p.x) < p.y < self._y_at(hi, p.x):
                out.append(tid)
        return out

    def traps_touching(self, tag: tuple) -> List[int]:
        """Free trapezoids with positive-length contact with pieces carrying
        the tag (the piece is the trapezoid's floor or ceiling)."""
        tagged = {i for i, (_, _, tags) in enumerate(self.pieces) if tag in tags}
        out = []
        for tid, (_, lo, hi, _) in enumerate(self.trap):
            if self.free[tid] and (lo in tagged or hi in tagged):
                out.append(tid)
        return out


def _shear_point(p: Point, lam: Fraction) -> Point:
    return Point(p.x + lam * p.y, p.y)


def _shear_polygon(poly: Polygon, lam: Fraction) -> Polygon:
    return Polygon(tuple(_shear_point(v, lam) for v in poly.vertices))


def _check_barrier(idx: int, seg: Segment, workspace: Polygon,
                   solids: List[Polygon]) -> None:
    def interior_midpoints(poly: Polygon):
        params = {Fraction(0), Fraction(1)}
        d = seg.b - seg.a
        dd = dot(d, d)
        for e in poly.edges():
            inter = segment_intersection(seg, e)
            if inter is None:
                continue
            pts = (inter.a, inter.b) if isinstance(inter, Segment) else (inter,)
            for p in pts:
                params.add(dot(p - seg.a, d) / dd)
        ts = sorted(params)
        for t1, t2 in zip(ts, ts[1:]):
            yield seg.a + d.scaled((t1 + t2) / 2)

    for mid in interior_midpoints(workspace):
        if point_in_polygon(mid, workspace) == OUTSIDE:
            raise InvalidBarrier(idx, "leaves the workspace")
    for solid in solids:
        for mid in interior_midpoints(solid):
            if point_in_polygon(mid, solid) == INSIDE:
                raise InvalidBarrier(idx, "crosses a shape interior")


def _point_sectors(p: Point, incident: List[Tuple[Segment, int]],
                   all_pieces: List[Segment]) -> List[Point]:
    """Displaced probe points, one per free sector around p compatible with
    every (line, side) assignment; empty when the sides conflict."""
    dirs = {}
    for seg, _ in incident:
        ld = canonical_direction(seg.b - seg.a)
        dirs[(ld.x, ld.y)] = ld
        dirs[(-ld.x, -ld.y)] = Point(-ld.x, -ld.y)
    sorted_dirs = sorted(dirs.values(), key=_angle_sort_key)
    m = len(sorted_dirs)
    probes = []
    for i in range(m):
        u, v = sorted_dirs[i], sorted_dirs[(i + 1) % m]
        d = Point(u.x + v.x, u.y + v.y)
        if d.x == 0 and d.y == 0:
            d = Point(-u.y, u.x)
        ok = True
        for seg, side in incident:
            ld = canonical_direction(seg.b - seg.a)
            c = cross(Point(Fraction(0), Fraction(0)), ld, d)
            if (c > 0) != (side == ABOVE) or c == 0:
                ok = False
                break
        if ok:
            probes.append(safe_displacement(p, d, all_pieces))
    return probes


def verify_separation(inst: Instance, barriers: Sequence[Segment],
                      point_sides: Optional[PointSides] = None) -> VerificationReport:
    point_sides = point_sides or {}
    solids = [obj.shape for _, obj in inst.all_shapes() if not obj.is_point]
    for idx, seg in enumerate(barriers):
        _check_barrier(idx, seg, inst.workspace, solids)

    lam = _shear_factor(
        list(inst.workspace.edges())
        + [e for s in solids for e in s.edges()]
        + list(barriers))
    ws = _shear_polygon(inst.workspace, lam)
    sheared_solids = [_shear_polygon(s, lam) for s in solids]

    inputs: List[Tuple[Segment, tuple]] = []
    for e in ws.edges():
        inputs.append((e, ("ws",)))
    shape_tags = []
    for label, obj in inst.all_shapes():
        if obj.is_point:
            continue
        tag = ("shape", label)
        shape_tags.append((label, tag))
        for e in _shear_polygon(obj.shape, lam).edges():
            inputs.append((e, tag))
    for i, seg in enumerate(barriers):
        inputs.append((Segment(_shear_point(seg.a, lam), _shear_point(seg.b, lam)),
                       ("barrier", i)))

    pieces = _split_all(inputs)
    decomp = _SlabDecomposition(pieces, ws, sheared_solids)
    piece_segs = [Segment(a, b) for a, b, _ in pieces]

    # attachment of every object to the free trapezoids it touches
    attach: List[Tuple[Tuple[int, int], List[int]]] = []
    for label, tag in shape_tags:
        if label[0] == "obstacle":
            continue
        attach.append((label, decomp.traps_touching(tag)))
    for set_idx, obj_idx, p in inst.point_objects():
        ps = _shear_point(p, lam)
        incident = []
        for i, seg in enumerate(barriers):
            if on_segment(p, seg):
                side = None
                for q, s in point_sides.get(i, ()):
                    if q == p:
                        side = s
                if side is None:
                    raise InvalidBarrier(
                        i, f"passes through point object {(set_idx, obj_idx)} "
                           "without a side assignment")
                incident.append(
                    (Segment(_shear_point(seg.a, lam), _shear_point(seg.b, lam)),
                     side))
        if not incident:
            traps = decomp.locate(ps)
        else:
            traps = []
            for probe in _point_sectors(ps, incident, piece_segs):
                traps.extend(decomp.locate(probe))
        attach.append(((set_idx, obj_idx), traps))

    comp_owner: Dict[int, Tuple[Tuple[int, int], int]] = {}
    for label, traps in attach:
        for t in traps:
            root = decomp._find(t)
            prev = comp_owner.get(root)
            if prev is not None and prev[0][0] != label[0]:
                path = _trap_path(decomp, prev[1], t)
                return VerificationReport(False, (prev[0], label, tuple(path)))
            if prev is None:
                comp_owner[root] = (label, t)
    return VerificationReport(True, None)


def _trap_path(decomp: _SlabDecomposition, src: int, dst: int) -> List[int]:
    from collections import deque
    parent = {src: -1}
    q = deque([src])
    while q:
        u = q.popleft()
        if u == dst:
            break
        for v in decomp.neighbors[u]:
            if v not in parent:
                parent[v] = u
                q.append(v)
    path = [dst]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return path[::-1]


def candidate_sides(cands: Sequence[CandidateSegment]) -> PointSides:
    """Side metadata for verify_separation from candidates' own point-side
    assignments, indexed by position in the list."""
    return {i: c.point_sides for i, c in enumerate(cands) if c.point_sides}


def brute_force_minimum(inst: Instance, candidates: Sequence[CandidateSegment],
                        max_size: int):
    """Smallest s <= max_size such that some s-subset of the candidates
    separates all sets, with the lexicographically first witness subset;
    (None, None) if no subset of size <= max_size works."""
    n = len(candidates)
    total = sum(comb(n, s) for s in range(0, min(max_size, n) + 1))
    if total > 10_000_000:
        raise TooLarge(f"{total} subsets exceed the enumeration guard")
    for s in range(0, min(max_size, n) + 1):
        for combo in combinations(range(n), s):
            chosen = [candidates[i] for i in combo]
            sides = candidate_sides(chosen)
            report = verify_separation(
                inst, [c.geometry for c in chosen], sides)
            if report.ok:
                return s, tuple(candidates[i].id for i in combo)
    return None, None
