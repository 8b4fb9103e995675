"""Exact planar subdivision of free space induced by the candidate barriers.

The subdivision is built from the workspace boundary, every shape boundary
and every candidate geometry: segments are split at all mutual
intersections, half-edges are sorted angularly around each vertex, and
faces are traced with interior on the left.  Clockwise cycles (holes and
the outer boundary) are attached to their containing face by exact
leftward ray shooting with an infinitesimal downward perturbation, which
resolves ray-through-vertex degeneracies without epsilons.

Point objects lying on candidate lines do not get a single fixed cell:
each incident sector is recorded together with the "away group" of
candidates whose side assignment for the point excludes that sector.  The
ILP module turns these records into selection-conditional class labels.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .candidates import ABOVE, CandidateSegment, canonical_direction
from .geometry import (
    INSIDE,
    Point,
    Segment,
    cross,
    dot,
    on_segment,
    point_in_polygon,
    safe_displacement,
    segment_intersection,
    _angle_sort_key,
)
from .instance import Instance


class LabelConflict(RuntimeError):
    """One cell would need two different class labels."""


@dataclass(frozen=True)
class Cell:
    id: int
    representative_point: Point
    contained_object: Optional[Tuple[int, int]]  # (set_idx, obj_idx)
    boundary: Tuple[Segment, ...]


@dataclass(frozen=True)
class AdjacencyEdge:
    cells: Tuple[int, int]  # sorted pair
    portion: Segment
    covering_candidates: Tuple[int, ...]


@dataclass(frozen=True)
class PointLabel:
    """Class label for `cell` that is active unless a candidate in
    away_group is selected (empty group = unconditional)."""
    cell: int
    set_idx: int
    away_group: Tuple[int, ...]
    point: Point


@dataclass(frozen=True)
class ArrangementResult:
    cells: Tuple[Cell, ...]
    adjacencies: Tuple[AdjacencyEdge, ...]
    num_candidates: int
    num_cells: int
    point_labels: Tuple[PointLabel, ...]
    euler: Tuple[int, int, int, int]  # (V, E, F, components)

    def fixed_cells(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for lab in self.point_labels:
            if not lab.away_group:
                if lab.cell in out and out[lab.cell] != lab.set_idx:
                    raise LabelConflict(
                        f"cell {lab.cell} labelled {out[lab.cell]} and {lab.set_idx}")
                out[lab.cell] = lab.set_idx
        return out


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _split_segments(inputs: List[Tuple[Segment, tuple]]):
    """Split segments at all mutual intersections.

    Returns {elementary edge key: (Point, Point, set of sources)} with the
    key canonically ordered.
    """
    n = len(inputs)
    cuts: List[set] = [set() for _ in range(n)]
    boxes = []
    for seg, _ in inputs:
        xs = sorted((seg.a.x, seg.b.x))
        ys = sorted((seg.a.y, seg.b.y))
        boxes.append((xs[0], xs[1], ys[0], ys[1]))
    for i in range(n):
        si = inputs[i][0]
        bi = boxes[i]
        cuts[i].add(si.a.key())
        cuts[i].add(si.b.key())
        for j in range(i + 1, n):
            bj = boxes[j]
            if bi[1] < bj[0] or bj[1] < bi[0] or bi[3] < bj[2] or bj[3] < bi[2]:
                continue
            inter = segment_intersection(si, inputs[j][0])
            if inter is None:
                continue
            if isinstance(inter, Segment):
                pts = (inter.a, inter.b)
            else:
                pts = (inter,)
            for p in pts:
                cuts[i].add(p.key())
                cuts[j].add(p.key())
    edges: Dict[tuple, tuple] = {}
    for i, (seg, source) in enumerate(inputs):
        d = seg.b - seg.a
        dd = dot(d, d)
        pts = sorted(
            (Point(x, y) for x, y in cuts[i]),
            key=lambda p: dot(p - seg.a, d) / dd,
        )
        for a, b in zip(pts, pts[1:]):
            if a == b:
                continue
            key = (a.key(), b.key()) if a.key() <= b.key() else (b.key(), a.key())
            if key in edges:
                edges[key][2].add(source)
            else:
                pa, pb = (a, b) if a.key() <= b.key() else (b, a)
                edges[key] = (pa, pb, {source})
    return edges


class _Subdivision:
    """Half-edge structure over elementary edges, with face cycles and
    hole-to-face attachment."""

    def __init__(self, edge_map):
        # edge e -> half-edges 2e (a->b) and 2e+1 (b->a)
        self.edges = list(edge_map.values())  # (Point, Point, sources)
        self.n_edges = len(self.edges)
        self.origin: List[Point] = []
        self.target: List[Point] = []
        for a, b, _ in self.edges:
            self.origin += [a, b]
            self.target += [b, a]
        self.vertices: Dict[tuple, List[int]] = {}
        for h in range(2 * self.n_edges):
            self.vertices.setdefault(self.origin[h].key(), []).append(h)
        for vkey, outs in self.vertices.items():
            outs.sort(key=lambda h: _angle_sort_key(self.target[h] - self.origin[h]))
        self._rank = {}
        for outs in self.vertices.values():
            for idx, h in enumerate(outs):
                self._rank[h] = idx
        self.next: List[int] = [0] * (2 * self.n_edges)
        for h in range(2 * self.n_edges):
            twin = h ^ 1
            outs = self.vertices[self.origin[twin].key()]
            self.next[h] = outs[(self._rank[twin] - 1) % len(outs)]
        self._trace_cycles()
        self._attach_holes()

    def _trace_cycles(self) -> None:
        self.cycle_of: List[int] = [-1] * (2 * self.n_edges)
        self.cycle_area2: List[Fraction] = []
        self.cycle_edges: List[List[int]] = []
        for h0 in range(2 * self.n_edges):
            if self.cycle_of[h0] != -1:
                continue
            cid = len(self.cycle_area2)
            area2 = Fraction(0)
            members = []
            h = h0
            while True:
                self.cycle_of[h] = cid
                members.append(h)
                a, b = self.origin[h], self.target[h]
                area2 += a.x * b.y - b.x * a.y
                h = self.next[h]
                if h == h0:
                    break
            self.cycle_area2.append(area2)
            self.cycle_edges.append(members)

    # --- exact leftward ray shooting with downward perturbation ----------

    def _shoot_left(self, p: Point) -> Optional[int]:
        """First half-edge hit by the ray from p in direction (-1, -delta)
        for infinitesimal delta; returns the half-edge whose left face
        contains points just right of the hit, or None (unbounded)."""
        best_key = None
        best_edge = None
        for e in range(self.n_edges):
            a, b, _ = self.edges[e]
            if a.y == b.y:
                continue
            lo, hi = (a, b) if a.y < b.y else (b, a)
            if not (lo.y < p.y <= hi.y):
                continue
            # x where the edge crosses y = p.y, and its first-order change
            # as the ray dips by delta
            s = (hi.x - lo.x) / (hi.y - lo.y)
            x0 = lo.x + s * (p.y - lo.y)
            if x0 > p.x or (x0 == p.x and s <= 0):
                continue
            key = (x0, -s)
            if best_key is None or key > best_key:
                best_key = key
                best_edge = self._halfedge(hi, lo)
        return best_edge

    def _halfedge(self, a: Point, b: Point) -> int:
        for h in self.vertices[a.key()]:
            if self.target[h] == b and self.origin[h] == a:
                return h
        raise AssertionError("half-edge lookup failed")

    def _attach_holes(self) -> None:
        ncyc = len(self.cycle_area2)
        self.OUTER = ncyc
        uf = _UnionFind(ncyc + 1)
        for cid in range(ncyc):
            if self.cycle_area2[cid] > 0:
                continue
            # leftmost-lowest vertex of the cycle
            v = min((self.origin[h] for h in self.cycle_edges[cid]),
                    key=lambda q: q.key())
            hit = self._shoot_left(v)
            if hit is None:
                uf.union(cid, self.OUTER)
            else:
                uf.union(cid, self.cycle_of[hit])
        self.region_uf = uf

    def region_of_cycle(self, cid: int) -> int:
        return self.region_uf.find(cid)

    def locate(self, p: Point) -> int:
        """Region containing p; p must not lie on any edge."""
        hit = self._shoot_left(p)
        if hit is None:
            return self.region_uf.find(self.OUTER)
        return self.region_uf.find(self.cycle_of[hit])

    def all_segments(self) -> List[Segment]:
        return [Segment(a, b) for a, b, _ in self.edges]


def _line_key(a: Point, b: Point):
    A = b.y - a.y
    B = a.x - b.x
    C = -(A * a.x + B * a.y)
    if A != 0:
        return (Fraction(1), B / A, C / A)
    return (Fraction(0), Fraction(1), C / B)


def build_arrangement(inst: Instance,
                      candidates: Sequence[CandidateSegment]) -> ArrangementResult:
    # 1. collect input segments with provenance
    inputs: List[Tuple[Segment, tuple]] = []
    for e in inst.workspace.edges():
        inputs.append((e, ("ws",)))
    for label, obj in inst.all_shapes():
        if obj.is_point:
            continue
        tag = ("obs",) if label[0] == "obstacle" else ("obj", label[0], label[1])
        for e in obj.shape.edges():
            inputs.append((e, tag))
    geom_ids: Dict[tuple, List[int]] = {}
    for cand in candidates:
        geom_ids.setdefault(cand.geometry.key(), []).append(cand.id)
    for gkey in sorted(geom_ids):
        (ax, ay), (bx, by) = gkey
        inputs.append((Segment(Point(ax, ay), Point(bx, by)), ("cand", gkey)))

    edge_map = _split_segments(inputs)
    sub = _Subdivision(edge_map)

    # 2. classify regions via an exact interior representative per region
    region_rep: Dict[int, Point] = {}
    all_elem = sub.all_segments()
    # the displacement ray first leaves a face through the face's own
    # boundary, so only same-region edges need to be checked
    region_edges: Dict[int, List[Segment]] = {}
    for cid in range(len(sub.cycle_area2)):
        region = sub.region_of_cycle(cid)
        lst = region_edges.setdefault(region, [])
        for h in sub.cycle_edges[cid]:
            lst.append(Segment(sub.origin[h], sub.target[h]))
    for cid, area2 in enumerate(sub.cycle_area2):
        if area2 <= 0:
            continue
        region = sub.region_of_cycle(cid)
        # deterministic edge of the CCW cycle, displaced to its left
        h = min(sub.cycle_edges[cid],
                key=lambda h: (Segment(sub.origin[h], sub.target[h]).key(),
                               sub.origin[h].key()))
        a, b = sub.origin[h], sub.target[h]
        mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
        d = b - a
        normal = Point(-d.y, d.x)  # left of travel, i.e. face interior
        rep = safe_displacement(mid, normal, region_edges[region])
        region_rep[region] = rep

    shapes = [(label, obj) for label, obj in inst.all_shapes() if not obj.is_point]
    # bounding boxes make the inside-a-shape rejection cheap for the many
    # representatives far from any shape
    boxed = []
    for _, obj in shapes:
        vs = obj.shape.vertices
        xs = [v.x for v in vs]
        ys = [v.y for v in vs]
        boxed.append((min(xs), max(xs), min(ys), max(ys), obj.shape))
    free_cells: Dict[int, Point] = {}
    for region, rep in region_rep.items():
        if point_in_polygon(rep, inst.workspace) != INSIDE:
            continue
        if any(x0 <= rep.x <= x1 and y0 <= rep.y <= y1
               and point_in_polygon(rep, poly) == INSIDE
               for x0, x1, y0, y1, poly in boxed):
            continue
        free_cells[region] = rep

    order = sorted(free_cells, key=lambda r: free_cells[r].key())
    cell_id = {region: i for i, region in enumerate(order)}

    def region_of_halfedge(h: int) -> int:
        return sub.region_of_cycle(sub.cycle_of[h])

    # 3. labels from polygon objects (free cells touching the boundary)
    contained: Dict[int, Tuple[int, int]] = {}
    labels: List[PointLabel] = []
    seen_labels = set()

    def add_label(cell: int, set_idx: int, away: Tuple[int, ...], p: Point,
                  obj_idx: Optional[int] = None) -> None:
        key = (cell, set_idx, away)
        if key not in seen_labels:
            seen_labels.add(key)
            labels.append(PointLabel(cell, set_idx, away, p))
        if not away:
            prev = contained.get(cell)
            if prev is not None and prev[0] != set_idx:
                raise LabelConflict(
                    f"cell {cell} touches objects of sets {prev[0]} and {set_idx}")
            if prev is None and obj_idx is not None:
                contained[cell] = (set_idx, obj_idx)

    for e_idx, (a, b, sources) in enumerate(sub.edges):
        for src in sources:
            if src[0] != "obj":
                continue
            for h in (2 * e_idx, 2 * e_idx + 1):
                region = region_of_halfedge(h)
                if region in cell_id:
                    add_label(cell_id[region], src[1], (), a, obj_idx=src[2])

    # 4. point-object labels (conditional when the point sits on candidates)
    origin = Point(Fraction(0), Fraction(0))
    for set_idx, obj_idx, p in inst.point_objects():
        incident = [c for c in candidates if on_segment(p, c.geometry)]
        if not incident:
            d = Point(Fraction(1), Fraction(0))
            q = safe_displacement(p, d, all_elem)
            region = sub.locate(q)
            if region not in cell_id:
                raise LabelConflict(f"point object {(set_idx, obj_idx)} not in a free cell")
            add_label(cell_id[region], set_idx, (), p, obj_idx=obj_idx)
            continue
        # free sectors around p, each with the face's half-edge structure:
        # the face in the angular gap after an outgoing half-edge is the
        # face on that half-edge's left
        sectors: List[Tuple[Point, int]] = []  # (interior direction, region)
        pk = p.key()
        if pk in sub.vertices:
            outs = sub.vertices[pk]
            m = len(outs)
            for i in range(m):
                u = sub.target[outs[i]] - p
                v = sub.target[outs[(i + 1) % m]] - p
                d = Point(u.x + v.x, u.y + v.y)
                if d.x == 0 and d.y == 0:
                    d = Point(-u.y, u.x)
                sectors.append((d, region_of_halfedge(outs[i])))
        else:
            e_idx = next(i for i, (a, b, _) in enumerate(sub.edges)
                         if on_segment(p, Segment(a, b)))
            a, b, _ = sub.edges[e_idx]
            u = b - a
            sectors.append((Point(-u.y, u.x), region_of_halfedge(2 * e_idx)))
            sectors.append((Point(u.y, -u.x), region_of_halfedge(2 * e_idx + 1)))
        for d, region in sectors:
            if region not in cell_id:
                raise LabelConflict(
                    f"point object {(set_idx, obj_idx)} sector not in a free cell")
            away = []
            for c in incident:
                side = c.side_of(p)
                if side is None:
                    continue
                ld = canonical_direction(c.line[1] - c.line[0])
                cr = cross(origin, ld, d)
                in_half = cr > 0 if side == ABOVE else cr < 0
                if not in_half:
                    away.append(c.id)
            add_label(cell_id[region], set_idx, tuple(sorted(away)), p,
                      obj_idx=obj_idx)

    # 5. adjacency portions between free cells along candidate edges
    raw_portions: Dict[tuple, List[Tuple[Segment, Tuple[int, int]]]] = {}
    for e_idx, (a, b, sources) in enumerate(sub.edges):
        covering = sorted({
            cid for src in sources if src[0] == "cand"
            for cid in geom_ids[src[1]]
        })
        if not covering:
            continue
        r1 = region_of_halfedge(2 * e_idx)
        r2 = region_of_halfedge(2 * e_idx + 1)
        if r1 not in cell_id or r2 not in cell_id:
            continue
        c1, c2 = cell_id[r1], cell_id[r2]
        if c1 == c2:
            continue
        pair = (min(c1, c2), max(c1, c2))
        gkey = (pair, tuple(covering), _line_key(a, b))
        raw_portions.setdefault(gkey, []).append((Segment(a, b), pair))

    adjacencies: List[AdjacencyEdge] = []
    for (pair, covering, _), pieces in sorted(
            raw_portions.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2])):
        segs = [s for s, _ in pieces]
        d = segs[0].b - segs[0].a
        dd = dot(d, d)
        origin = segs[0].a
        ivals = sorted(
            (tuple(sorted((dot(s.a - origin, d) / dd, dot(s.b - origin, d) / dd))), s)
            for s in segs)
        run_lo, run_hi = ivals[0][0]
        for (lo, hi), _ in ivals[1:]:
            if lo == run_hi:
                run_hi = hi
            else:
                adjacencies.append(AdjacencyEdge(
                    pair,
                    Segment(origin + d.scaled(run_lo), origin + d.scaled(run_hi)),
                    covering))
                run_lo, run_hi = lo, hi
        adjacencies.append(AdjacencyEdge(
            pair,
            Segment(origin + d.scaled(run_lo), origin + d.scaled(run_hi)),
            covering))

    # 6. cell boundaries
    boundary: Dict[int, List[Segment]] = {c: [] for c in cell_id.values()}
    for e_idx, (a, b, _) in enumerate(sub.edges):
        r1 = region_of_halfedge(2 * e_idx)
        r2 = region_of_halfedge(2 * e_idx + 1)
        if r1 == r2:
            continue
        for r in (r1, r2):
            if r in cell_id:
                boundary[cell_id[r]].append(Segment(a, b))

    cells = tuple(
        Cell(cell_id[region], free_cells[region],
             contained.get(cell_id[region]),
             tuple(sorted(boundary[cell_id[region]], key=lambda s: s.key())))
        for region in order)

    # 7. generalized Euler formula V - E + F = 1 + C
    nverts = len(sub.vertices)
    vkeys = {k: i for i, k in enumerate(sub.vertices)}
    comp = _UnionFind(nverts)
    for a, b, _ in sub.edges:
        comp.union(vkeys[a.key()], vkeys[b.key()])
    ncomp = len({comp.find(i) for i in range(nverts)})
    nfaces = len({sub.region_of_cycle(cid) for cid in range(len(sub.cycle_area2))}
                 | {sub.region_uf.find(sub.OUTER)})
    euler = (nverts, sub.n_edges, nfaces, ncomp)
    if nverts - sub.n_edges + nfaces != 1 + ncomp:
        raise AssertionError(f"Euler check failed: {euler}")

    return ArrangementResult(
        cells=cells,
        adjacencies=tuple(adjacencies),
        num_candidates=len(candidates),
        num_cells=len(cells),
        point_labels=tuple(labels),
        euler=euler,
    )


def connectivity(result: ArrangementResult, selected) -> List[List[int]]:
    """Connected components of free space once the selected candidates are
    erected: adjacent cells merge iff no covering candidate is selected."""
    selected = set(selected)
    uf = _UnionFind(result.num_cells)
    for adj in result.adjacencies:
        if not selected.intersection(adj.covering_candidates):
            uf.union(*adj.cells)
    comps: Dict[int, List[int]] = {}
    for c in range(result.num_cells):
        comps.setdefault(uf.find(c), []).append(c)
    return [sorted(v) for _, v in sorted(comps.items())]
