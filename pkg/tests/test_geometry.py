"""Exact predicates, intersections and polygon containment."""
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barriers.geometry import (
    BOUNDARY,
    COLLINEAR,
    INSIDE,
    LEFT,
    OUTSIDE,
    RIGHT,
    Point,
    Polygon,
    Segment,
    format_coord,
    on_segment,
    open_cone_direction,
    orientation,
    parse_coord,
    point_in_polygon,
    pt,
    safe_displacement,
    segment_intersection,
    segment_intersects_interior,
)

coords = st.fractions(
    min_value=-100, max_value=100, max_denominator=1000)
points = st.builds(Point, coords, coords)


def test_parse_format_roundtrip():
    for text in ("0", "-3.5", "1.25", "100", "0.001"):
        assert format_coord(parse_coord(text)) == text
    assert parse_coord("1/3") == F(1, 3)
    assert format_coord(F(1, 3)) == "1/3"
    assert format_coord(F(-7, 2)) == "-3.5"


def test_orientation_basic():
    assert orientation(pt(0, 0), pt(1, 0), pt(0, 1)) == LEFT
    assert orientation(pt(0, 0), pt(1, 0), pt(0, -1)) == RIGHT
    assert orientation(pt(0, 0), pt(1, 1), pt(2, 2)) == COLLINEAR


@given(points, points, points)
def test_orientation_antisymmetry(a, b, c):
    assert orientation(a, b, c) == -orientation(b, a, c)


@given(points, points, points, points)
def test_orientation_translation_invariant(a, b, c, t):
    shift = lambda p: Point(p.x + t.x, p.y + t.y)
    assert orientation(a, b, c) == orientation(shift(a), shift(b), shift(c))


def test_segment_intersection_cases():
    s1 = Segment(pt(0, 0), pt(4, 4))
    s2 = Segment(pt(0, 4), pt(4, 0))
    assert segment_intersection(s1, s2) == pt(2, 2)
    # touching at an endpoint
    s3 = Segment(pt(4, 4), pt(8, 0))
    assert segment_intersection(s1, s3) == pt(4, 4)
    # disjoint parallels
    s4 = Segment(pt(0, 1), pt(4, 5))
    assert segment_intersection(s1, s4) is None
    # collinear overlap
    s5 = Segment(pt(2, 2), pt(6, 6))
    overlap = segment_intersection(s1, s5)
    assert isinstance(overlap, Segment)
    assert {overlap.a, overlap.b} == {pt(2, 2), pt(4, 4)}
    # collinear point contact
    s6 = Segment(pt(4, 4), pt(6, 6))
    assert segment_intersection(s1, s6) == pt(4, 4)


@given(points, points, points, points)
def test_segment_intersection_symmetric(a, b, c, d):
    if a == b or c == d:
        return
    r1 = segment_intersection(Segment(a, b), Segment(c, d))
    r2 = segment_intersection(Segment(c, d), Segment(a, b))
    if isinstance(r1, Segment):
        assert isinstance(r2, Segment)
        assert {r1.a, r1.b} == {r2.a, r2.b}
    else:
        assert r1 == r2


def test_polygon_normalization():
    # clockwise input is reversed to counterclockwise
    poly = Polygon((pt(0, 0), pt(0, 2), pt(2, 2), pt(2, 0)))
    assert poly.area2() > 0
    # collinear vertex dropped
    poly2 = Polygon((pt(0, 0), pt(1, 0), pt(2, 0), pt(2, 2), pt(0, 2)))
    assert len(poly2.vertices) == 4


def test_polygon_rejects_degenerate():
    with pytest.raises(ValueError):
        Polygon((pt(0, 0), pt(1, 0), pt(2, 0)))
    with pytest.raises(ValueError):
        # self-intersecting bowtie
        Polygon((pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)))


def test_point_in_polygon():
    poly = Polygon((pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)))
    assert point_in_polygon(pt(2, 2), poly) == INSIDE
    assert point_in_polygon(pt(5, 2), poly) == OUTSIDE
    assert point_in_polygon(pt(4, 2), poly) == BOUNDARY
    assert point_in_polygon(pt(0, 0), poly) == BOUNDARY


@given(points, points, points)
def test_polygon_vertices_are_boundary(a, b, c):
    if orientation(a, b, c) == COLLINEAR:
        return
    poly = Polygon((a, b, c))
    for v in poly.vertices:
        assert point_in_polygon(v, poly) == BOUNDARY


def test_segment_interior_crossing():
    poly = Polygon((pt(0, 0), pt(4, 0), pt(4, 4), pt(0, 4)))
    assert segment_intersects_interior(Segment(pt(-1, 2), pt(5, 2)), poly)
    # grazing along an edge stays outside the interior
    assert not segment_intersects_interior(Segment(pt(-1, 0), pt(5, 0)), poly)
    # touching a vertex only
    assert not segment_intersects_interior(Segment(pt(-1, 1), pt(1, -1)), poly)


def test_open_cone_direction():
    d = open_cone_direction([(pt(1, 0), LEFT)])
    assert d.y > 0
    d = open_cone_direction([(pt(1, 0), LEFT), (pt(0, 1), RIGHT)])
    assert d.y > 0 and d.x > 0
    # empty cone: both sides of the same line
    assert open_cone_direction([(pt(1, 0), LEFT), (pt(1, 0), RIGHT)]) is None


def test_safe_displacement_stays_clear():
    walls = [Segment(pt(0, 2), pt(10, 2))]
    q = safe_displacement(pt(5, 0), pt(0, 1), walls)
    assert 0 < q.y < 2 and q.x == 5


@given(points, points, points)
@settings(max_examples=50)
def test_on_segment_endpoints(a, b, c):
    if a == b:
        return
    s = Segment(a, b)
    assert on_segment(a, s) and on_segment(b, s)
    mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
    assert on_segment(mid, s)
