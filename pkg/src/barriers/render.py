"""Deterministic SVG rendering of instances, candidates and solutions.

Exact rational coordinates are kept all the way down; rounding to 6
decimals happens only when attribute strings are written.  The y axis is
flipped so figures read with y growing upward.
"""
from __future__ import annotations

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .geometry import Point, Segment
from .instance import Instance

PALETTE = (
    "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e",
    "#17becf", "#8c564b", "#e377c2", "#bcbd22",
)
OBSTACLE_FILL = "#b0b0b0"
BARRIER_COLOR = "#d62728"
CANDIDATE_COLOR = "#999999"

_SCALE = 8  # svg units per coordinate unit


def _fmt(value: Fraction) -> str:
    text = f"{float(value):.6f}".rstrip("0").rstrip(".")
    return text if text not in ("-0", "") else "0"


class _Canvas:
    def __init__(self, lo: Point, hi: Point):
        pad = (hi.x - lo.x + hi.y - lo.y) / 2 * Fraction(5, 100)
        self.lo = Point(lo.x - pad, lo.y - pad)
        self.hi = Point(hi.x + pad, hi.y + pad)
        self.width = (self.hi.x - self.lo.x) * _SCALE
        self.height = (self.hi.y - self.lo.y) * _SCALE

    def x(self, v: Fraction) -> str:
        return _fmt((v - self.lo.x) * _SCALE)

    def y(self, v: Fraction) -> str:
        return _fmt((self.hi.y - v) * _SCALE)  # flip


def _poly_points(canvas: _Canvas, vertices) -> str:
    return " ".join(f"{canvas.x(v.x)},{canvas.y(v.y)}" for v in vertices)


def render_svg(inst: Instance,
               barriers: Sequence[Segment] = (),
               candidates: Sequence[Segment] = ()) -> str:
    xs = [v.x for v in inst.workspace.vertices]
    ys = [v.y for v in inst.workspace.vertices]
    canvas = _Canvas(Point(min(xs), min(ys)), Point(max(xs), max(ys)))
    out: List[str] = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(canvas.width)}" height="{_fmt(canvas.height)}" '
        f'viewBox="0 0 {_fmt(canvas.width)} {_fmt(canvas.height)}">',
        f'<polygon points="{_poly_points(canvas, inst.workspace.vertices)}" '
        f'fill="white" stroke="black" stroke-width="2"/>',
    ]
    for obj in inst.obstacles:
        if obj.is_point:
            p = obj.shape
            out.append(f'<circle cx="{canvas.x(p.x)}" cy="{canvas.y(p.y)}" '
                       f'r="3" fill="{OBSTACLE_FILL}"/>')
        else:
            out.append(f'<polygon points="{_poly_points(canvas, obj.shape.vertices)}" '
                       f'fill="{OBSTACLE_FILL}" stroke="none"/>')
    for set_idx, group in enumerate(inst.sets):
        color = PALETTE[set_idx % len(PALETTE)]
        for obj in group:
            if obj.is_point:
                p = obj.shape
                out.append(f'<circle cx="{canvas.x(p.x)}" cy="{canvas.y(p.y)}" '
                           f'r="3" fill="{color}"/>')
            else:
                out.append(
                    f'<polygon points="{_poly_points(canvas, obj.shape.vertices)}" '
                    f'fill="{color}" stroke="none"/>')
    for seg in candidates:
        out.append(f'<line x1="{canvas.x(seg.a.x)}" y1="{canvas.y(seg.a.y)}" '
                   f'x2="{canvas.x(seg.b.x)}" y2="{canvas.y(seg.b.y)}" '
                   f'stroke="{CANDIDATE_COLOR}" stroke-width="0.5" '
                   f'stroke-dasharray="4 3"/>')
    for seg in barriers:
        out.append(f'<line x1="{canvas.x(seg.a.x)}" y1="{canvas.y(seg.a.y)}" '
                   f'x2="{canvas.x(seg.b.x)}" y2="{canvas.y(seg.b.y)}" '
                   f'stroke="{BARRIER_COLOR}" stroke-width="2"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
