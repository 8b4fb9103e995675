"""Planar subdivision: cells, adjacency portions, labels, Euler accounting."""
from fractions import Fraction as F

import pytest

from barriers.arrangement import (
    LabelConflict,
    build_arrangement,
    connectivity,
)
from barriers.candidates import BITANGENT, CandidateSegment, enumerate_bitangents
from barriers.generators import GenSpec, RANDOM_POINTS, TSP_POLYGONS, generate
from barriers.geometry import Polygon, Segment, pt
from barriers.instance import GeomObject, Instance

WS = Polygon((pt(0, 0), pt(10, 0), pt(10, 10), pt(0, 10)))


def cand(i, a, b):
    return CandidateSegment(i, Segment(a, b), (a, b), (), BITANGENT, ())


def grid_fixture():
    """Rectangle cut into 6 cells by two verticals and one horizontal."""
    ws = Polygon((pt(0, 0), pt(6, 0), pt(6, 4), pt(0, 4)))
    inst = Instance(
        ws, ((GeomObject(pt(1, 3)),), (GeomObject(pt(1, 1)),)), ())
    cands = [cand(0, pt(2, 0), pt(2, 4)), cand(1, pt(4, 0), pt(4, 4)),
             cand(2, pt(0, 2), pt(6, 2))]
    return inst, cands


def test_empty_workspace_single_cell():
    inst = Instance(WS, ((GeomObject(pt(5, 5)),),), ())
    arr = build_arrangement(inst, [])
    assert arr.num_cells == 1
    assert arr.adjacencies == ()
    assert arr.cells[0].contained_object == (0, 0)


def test_grid_fixture_six_cells():
    inst, cands = grid_fixture()
    arr = build_arrangement(inst, cands)
    assert arr.num_cells == 6
    assert len(arr.adjacencies) == 7
    # the two labelled cells on the left are split by the horizontal cut
    pair_cover = {a.cells: a.covering_candidates for a in arr.adjacencies}
    assert pair_cover[(0, 1)] == (2,)
    assert arr.fixed_cells() == {0: 1, 1: 0}
    v, e, f, comps = arr.euler
    assert v - e + f == 1 + comps


def test_obstacle_island_hole_merging():
    block = Polygon((pt(4, 4), pt(6, 4), pt(6, 6), pt(4, 6)))
    inst = Instance(WS, ((GeomObject(pt(2, 2)),),), (GeomObject(block),))
    arr = build_arrangement(inst, [])
    assert arr.num_cells == 1  # the free annulus is one face
    v, e, f, comps = arr.euler
    assert comps == 2
    assert v - e + f == 1 + comps


def test_point_contact_cells_not_adjacent():
    # two candidates crossing at a point: diagonal quadrants only meet at
    # the crossing and must not merge when both candidates are selected
    inst = Instance(
        WS, ((GeomObject(pt(2, 5)),), (GeomObject(pt(8, 5)),)), ())
    cands = [cand(0, pt(5, 0), pt(5, 10)), cand(1, pt(0, 5), pt(10, 5))]
    # avoid labels on the horizontal line: move the objects off it
    inst = Instance(
        WS, ((GeomObject(pt(2, 3)),), (GeomObject(pt(8, 7)),)), ())
    arr = build_arrangement(inst, cands)
    assert arr.num_cells == 4
    comps = connectivity(arr, [0, 1])
    assert comps == [[0], [1], [2], [3]]
    # selecting only the vertical keeps top/bottom merged on each side
    comps = connectivity(arr, [0])
    assert comps == [[0, 1], [2, 3]]


def test_collinear_overlapping_candidates_share_portions():
    inst = Instance(
        WS, ((GeomObject(pt(2, 3)),), (GeomObject(pt(2, 7)),)), ())
    cands = [cand(0, pt(0, 5), pt(10, 5)), cand(1, pt(0, 5), pt(6, 5))]
    arr = build_arrangement(inst, cands)
    assert arr.num_cells == 2
    covers = sorted(a.covering_candidates for a in arr.adjacencies)
    assert covers == [(0,), (0, 1)]
    # blocking via either candidate on the shared portion still requires
    # covering the exclusive portion
    assert len(connectivity(arr, [1])) == 1
    assert len(connectivity(arr, [0])) == 2


def test_conditional_point_labels():
    inst = Instance(WS, ((GeomObject(pt(3, 5)),), (GeomObject(pt(7, 5)),)), ())
    cands = enumerate_bitangents(inst)
    arr = build_arrangement(inst, cands)
    assert arr.num_cells == 2
    assert all(lab.away_group for lab in arr.point_labels)
    # each point gets one label per side of the shared line
    by_pt = {}
    for lab in arr.point_labels:
        by_pt.setdefault(lab.point, set()).add(lab.cell)
    assert all(cells == {0, 1} for cells in by_pt.values())


def test_label_conflict_detected():
    # two different-class point objects in the same cell, no candidates
    inst = Instance(WS, ((GeomObject(pt(3, 5)),), (GeomObject(pt(7, 5)),)), ())
    with pytest.raises(LabelConflict):
        arr = build_arrangement(inst, [])
        arr.fixed_cells()


def test_cells_tile_and_euler_on_random_instances():
    for seed in range(4):
        inst = generate(GenSpec(RANDOM_POINTS, 2, 2, 2, seed=seed))
        cands = enumerate_bitangents(inst)
        arr = build_arrangement(inst, cands)
        v, e, f, comps = arr.euler
        assert v - e + f == 1 + comps
        reps = [c.representative_point for c in arr.cells]
        assert len(set(reps)) == len(reps)
        assert [c.id for c in arr.cells] == sorted(
            range(arr.num_cells), key=lambda i: arr.cells[i].representative_point.key())


def test_polygon_objects_label_touching_cells():
    for seed in range(3):
        inst = generate(GenSpec(TSP_POLYGONS, 2, 1, 0, seed=seed))
        arr = build_arrangement(inst, enumerate_bitangents(inst))
        classes = {}
        for cell in arr.cells:
            if cell.contained_object is not None:
                classes.setdefault(cell.contained_object[0], 0)
                classes[cell.contained_object[0]] += 1
        assert set(classes) == {0, 1}
        assert all(v >= 1 for v in classes.values())


def test_connectivity_matches_adjacency_flood():
    inst, cands = grid_fixture()
    arr = build_arrangement(inst, cands)
    # selecting nothing merges everything
    assert connectivity(arr, []) == [list(range(6))]
    # selecting everything isolates every cell
    assert connectivity(arr, [0, 1, 2]) == [[i] for i in range(6)]
