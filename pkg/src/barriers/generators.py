"""Random-instance generators: point sets, TSP-tour polygons, grid squares.

Randomness comes from a self-contained splitmix64 stream so that a seed
reproduces the same instance on every platform and Python version.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import sqrt

from .geometry import Point, Polygon
from .instance import GeomObject, Instance, validate

RANDOM_POINTS = "random-points"
TSP_POLYGONS = "tsp-polygons"
GRID_SQUARES = "grid-squares"

KINDS = (RANDOM_POINTS, TSP_POLYGONS, GRID_SQUARES)

# sampling granularity: all generated coordinates are multiples of 1/1000
_GRAIN = 1000
# radius of the per-object vertex disk for TSP polygons
_DISK_RADIUS = 6

_MAX_TRIES = 20000


class GenerationFailed(RuntimeError):
    pass


class SplitMix64:
    """splitmix64 PRNG (Steele, Lea & Flood); 64-bit state, full period."""

    MASK = (1 << 64) - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection (no modulo bias)."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            v = self.next_u64()
            if v < limit:
                return v % n

    def shuffle(self, seq: list) -> None:
        for i in range(len(seq) - 1, 0, -1):
            j = self.below(i + 1)
            seq[i], seq[j] = seq[j], seq[i]


@dataclass(frozen=True)
class GenSpec:
    kind: str
    num_sets: int
    objects_per_set: int
    obstacles_per_set: int
    seed: int
    workspace_extent: Fraction = Fraction(100)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        if self.num_sets < 1 or self.objects_per_set < 0 or self.obstacles_per_set < 0:
            raise ValueError("counts must be non-negative (and num_sets >= 1)")
        if self.kind == GRID_SQUARES:
            total = self.num_sets * (self.objects_per_set + self.obstacles_per_set)
            if total > 49:
                raise ValueError("grid-squares capacity is 49 shapes (7x7 grid)")


def _square_workspace(extent: Fraction) -> Polygon:
    z = Fraction(0)
    return Polygon([Point(z, z), Point(extent, z), Point(extent, extent), Point(z, extent)])


def _sample_coord(rng: SplitMix64, lo: Fraction, hi: Fraction) -> Fraction:
    # multiples of 1/_GRAIN strictly inside (lo, hi)
    lo_n = int(lo * _GRAIN) + 1
    hi_n = -int(-hi * _GRAIN) - 1
    if hi_n < lo_n:
        raise GenerationFailed("sampling window is empty")
    return Fraction(lo_n + rng.below(hi_n - lo_n + 1), _GRAIN)


def _sample_point(rng: SplitMix64, lo: Fraction, hi: Fraction) -> Point:
    return Point(_sample_coord(rng, lo, hi), _sample_coord(rng, lo, hi))


def _tsp_order(points: list) -> list:
    """Exhaustive shortest tour over <= 6 points; ties pick the
    lexicographically smallest vertex order."""
    pts = sorted(points, key=lambda p: p.key())
    first = pts[0]
    best = None
    best_len = None
    for perm in permutations(pts[1:]):
        tour = (first,) + perm
        length = 0.0
        for i in range(len(tour)):
            a, b = tour[i], tour[(i + 1) % len(tour)]
            length += sqrt(float((a.x - b.x) ** 2 + (a.y - b.y) ** 2))
        key = tuple(p.key() for p in tour)
        if best_len is None or length < best_len or (length == best_len and key < best[1]):
            best = (tour, key)
            best_len = length
    return list(best[0])


def _gen_tsp_polygon(rng: SplitMix64, extent: Fraction) -> Polygon:
    margin = Fraction(_DISK_RADIUS + 1)
    center = _sample_point(rng, margin, extent - margin)
    n = 3 + rng.below(4)
    pts = []
    while len(pts) < n:
        d = _sample_point(rng, Fraction(-_DISK_RADIUS), Fraction(_DISK_RADIUS))
        if d.x * d.x + d.y * d.y >= _DISK_RADIUS * _DISK_RADIUS:
            continue
        p = center + d
        if p not in pts:
            pts.append(p)
    return Polygon(_tsp_order(pts))


def generate(spec: GenSpec) -> Instance:
    """Deterministic instance for a GenSpec; raises GenerationFailed when the
    spec is too crowded to place disjoint shapes."""
    rng = SplitMix64(spec.seed)
    ws = _square_workspace(spec.workspace_extent)

    if spec.kind == GRID_SQUARES:
        return _generate_grid_squares(spec, rng, ws)

    placed: list = []  # GeomObjects in placement order

    def place_one(make) -> GeomObject:
        for _ in range(_MAX_TRIES):
            obj = make()
            probe = Instance(ws, [list(placed) + [obj]], [])
            if not validate(probe):
                placed.append(obj)
                return obj
        raise GenerationFailed("could not place a disjoint shape; spec too crowded")

    def make_shape() -> GeomObject:
        if spec.kind == RANDOM_POINTS:
            return GeomObject(_sample_point(rng, Fraction(0), spec.workspace_extent))
        while True:
            try:
                return GeomObject(_gen_tsp_polygon(rng, spec.workspace_extent))
            except ValueError:
                continue  # degenerate sample (collinear / non-simple)

    sets = []
    for _ in range(spec.num_sets):
        sets.append([place_one(make_shape) for _ in range(spec.objects_per_set)])
    obstacles = []
    for _ in range(spec.num_sets * spec.obstacles_per_set):
        obstacles.append(place_one(make_shape))

    inst = Instance(ws, sets, obstacles)
    problems = validate(inst)
    if problems:  # pragma: no cover - placement already validated
        raise GenerationFailed("; ".join(problems))
    return inst


def _generate_grid_squares(spec: GenSpec, rng: SplitMix64, ws: Polygon) -> Instance:
    pitch = spec.workspace_extent / 7
    half = pitch / 4  # squares are half the pitch wide
    cells = [(i, j) for j in range(7) for i in range(7)]
    rng.shuffle(cells)

    def square_at(cell) -> GeomObject:
        i, j = cell
        cx = (Fraction(i) + Fraction(1, 2)) * pitch
        cy = (Fraction(j) + Fraction(1, 2)) * pitch
        return GeomObject(Polygon([
            Point(cx - half, cy - half),
            Point(cx + half, cy - half),
            Point(cx + half, cy + half),
            Point(cx - half, cy + half),
        ]))

    it = iter(cells)
    sets = [[square_at(next(it)) for _ in range(spec.objects_per_set)]
            for _ in range(spec.num_sets)]
    obstacles = [square_at(next(it))
                 for _ in range(spec.num_sets * spec.obstacles_per_set)]
    return Instance(ws, sets, obstacles)
