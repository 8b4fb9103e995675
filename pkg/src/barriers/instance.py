"""Problem instances: workspace, k object sets, obstacles; JSON round-trip."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Union

from .geometry import (
    INSIDE,
    OUTSIDE,
    Point,
    Polygon,
    Segment,
    format_coord,
    parse_coord,
    point_in_polygon,
    segment_intersection,
)


class ParseError(ValueError):
    pass


class ValidationError(ValueError):
    pass


Shape = Union[Point, Polygon]


@dataclass(frozen=True)
class GeomObject:
    shape: Shape

    @property
    def is_point(self) -> bool:
        return isinstance(self.shape, Point)


@dataclass(frozen=True)
class Instance:
    workspace: Polygon
    sets: tuple  # tuple of tuples of GeomObject
    obstacles: tuple  # tuple of GeomObject

    def __init__(self, workspace, sets, obstacles=()):
        object.__setattr__(self, "workspace", workspace)
        object.__setattr__(self, "sets", tuple(tuple(s) for s in sets))
        object.__setattr__(self, "obstacles", tuple(obstacles))

    @property
    def k(self) -> int:
        return len(self.sets)

    def all_shapes(self):
        """(label, GeomObject) pairs; label is (set_idx, obj_idx) or
        ('obstacle', idx)."""
        out = []
        for si, objs in enumerate(self.sets):
            for oi, obj in enumerate(objs):
                out.append(((si, oi), obj))
        for oi, obj in enumerate(self.obstacles):
            out.append((("obstacle", oi), obj))
        return out

    def polygons(self):
        """All polygon shapes (objects and obstacles)."""
        return [o.shape for _, o in self.all_shapes() if not o.is_point]

    def point_objects(self):
        """[(set_idx, obj_idx, Point)] for point objects only."""
        out = []
        for si, objs in enumerate(self.sets):
            for oi, obj in enumerate(objs):
                if obj.is_point:
                    out.append((si, oi, obj.shape))
        return out


def _strictly_inside(obj: GeomObject, ws: Polygon) -> bool:
    if obj.is_point:
        return point_in_polygon(obj.shape, ws) == INSIDE
    for v in obj.shape.vertices:
        if point_in_polygon(v, ws) != INSIDE:
            return False
    for e in obj.shape.edges():
        for we in ws.edges():
            if segment_intersection(e, we) is not None:
                return False
    return True


def _shapes_intersect(a: GeomObject, b: GeomObject) -> bool:
    """Closed-shape intersection; touching counts."""
    if a.is_point and b.is_point:
        return a.shape == b.shape
    if a.is_point:
        return point_in_polygon(a.shape, b.shape) != OUTSIDE
    if b.is_point:
        return point_in_polygon(b.shape, a.shape) != OUTSIDE
    for ea in a.shape.edges():
        for eb in b.shape.edges():
            if segment_intersection(ea, eb) is not None:
                return True
    # containment without edge contact
    if point_in_polygon(a.shape.vertices[0], b.shape) != OUTSIDE:
        return True
    if point_in_polygon(b.shape.vertices[0], a.shape) != OUTSIDE:
        return True
    return False


def validate(inst: Instance) -> List[str]:
    """Return human-readable invariant violations; empty list means valid."""
    violations = []
    if inst.k < 1:
        violations.append("instance has no object sets")
    labelled = inst.all_shapes()
    for label, obj in labelled:
        if not _strictly_inside(obj, inst.workspace):
            violations.append(f"containment: {label} not strictly inside workspace")
    for i in range(len(labelled)):
        for j in range(i + 1, len(labelled)):
            la, a = labelled[i]
            lb, b = labelled[j]
            if _shapes_intersect(a, b):
                violations.append(f"overlap: {la} intersects {lb}")
    return violations


# --- JSON format -----------------------------------------------------------


def _coords_out(p: Point):
    return [format_coord(p.x), format_coord(p.y)]


def _shape_out(obj: GeomObject):
    if obj.is_point:
        return {"point": _coords_out(obj.shape)}
    return {"polygon": [_coords_out(v) for v in obj.shape.vertices]}


def _point_in(pair, where: str) -> Point:
    if not isinstance(pair, list) or len(pair) != 2:
        raise ParseError(f"{where}: expected [x, y]")
    try:
        return Point(parse_coord(str(pair[0])), parse_coord(str(pair[1])))
    except ValueError as exc:
        raise ParseError(f"{where}: {exc}") from None


def _shape_in(doc, where: str) -> GeomObject:
    if not isinstance(doc, dict):
        raise ParseError(f"{where}: expected shape object")
    if "point" in doc:
        return GeomObject(_point_in(doc["point"], where))
    if "polygon" in doc:
        pts = [_point_in(p, f"{where}[{i}]") for i, p in enumerate(doc["polygon"])]
        try:
            return GeomObject(Polygon(pts))
        except ValueError as exc:
            raise ParseError(f"{where}: {exc}") from None
    raise ParseError(f"{where}: shape needs 'point' or 'polygon'")


def write_instance(inst: Instance) -> str:
    doc = {
        "workspace": [_coords_out(v) for v in inst.workspace.vertices],
        "sets": [[_shape_out(o) for o in s] for s in inst.sets],
        "obstacles": [_shape_out(o) for o in inst.obstacles],
    }
    return json.dumps(doc, indent=2) + "\n"


def read_instance(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    for key in ("workspace", "sets"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}")
    ws_pts = [_point_in(p, f"workspace[{i}]") for i, p in enumerate(doc["workspace"])]
    try:
        ws = Polygon(ws_pts)
    except ValueError as exc:
        raise ParseError(f"workspace: {exc}") from None
    sets = []
    for si, shapes in enumerate(doc["sets"]):
        sets.append([_shape_in(s, f"sets[{si}][{i}]") for i, s in enumerate(shapes)])
    obstacles = [
        _shape_in(s, f"obstacles[{i}]") for i, s in enumerate(doc.get("obstacles", []))
    ]
    inst = Instance(ws, sets, obstacles)
    problems = validate(inst)
    if problems:
        raise ValidationError("; ".join(problems))
    return inst
