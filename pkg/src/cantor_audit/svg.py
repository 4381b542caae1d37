"""Deterministic SVG drawings of path plans.

The viewport is fixed at 1000 x 1000 user units. A scene box
``[xmin, xmax] x [ymin, ymax]`` maps affinely onto the inner square
``[50, 950]`` on both axes with y pointing up::

    px = 50 + 900 * (x - xmin) / (xmax - xmin)
    py = 950 - 900 * (y - ymin) / (ymax - ymin)

Scene coordinates are the rational render approximations of each
coordinate; pixel values are rounded exactly to two decimals. Only the
first two coordinates are drawn.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence
from xml.sax.saxutils import escape

from .geometry import CircleArc, PathPlan

SIZE = 1000
MARGIN = 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _num(q) -> str:
    """Exact round-half-even to 2 decimals."""
    q = Fraction(q)
    cents = round(q * 100)
    sign = "-" if cents < 0 else ""
    cents = abs(cents)
    return f"{sign}{cents // 100}.{cents % 100:02d}"


def scene_bounds(plans: Sequence[PathPlan]) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    xs, ys = [], []
    for plan in plans:
        for p in plan.waypoints:
            x, y = p.render()[:2]
            xs.append(x)
            ys.append(y)
        for seg in plan.segments:
            if isinstance(seg, CircleArc):
                xs.extend(e[0] for e in seg.excluded)
                ys.extend(e[1] for e in seg.excluded)
    if not xs:
        return Fraction(0), Fraction(0), Fraction(1), Fraction(1)
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    if x0 == x1:
        x0, x1 = x0 - 1, x1 + 1
    if y0 == y1:
        y0, y1 = y0 - 1, y1 + 1
    padx, pady = (x1 - x0) / 20, (y1 - y0) / 20
    return x0 - padx, y0 - pady, x1 + padx, y1 + pady


class _Transform:
    def __init__(self, bounds):
        self.x0, self.y0, x1, y1 = (Fraction(b) for b in bounds)
        if x1 <= self.x0 or y1 <= self.y0:
            raise ValueError("scene bounds must have positive width and height")
        inner = SIZE - 2 * MARGIN
        self.sx = inner / (x1 - self.x0)
        self.sy = inner / (y1 - self.y0)

    def __call__(self, x, y) -> tuple[str, str]:
        return (
            _num(MARGIN + (x - self.x0) * self.sx),
            _num(SIZE - MARGIN - (y - self.y0) * self.sy),
        )


def _arc_path(arc: CircleArc, tf: _Transform) -> str:
    x0, y0 = tf(*arc.start.rational_xy())
    x1, y1 = tf(*arc.end.rational_xy())
    r = math.sqrt(arc.radius_squared)
    rx = f"{r * float(tf.sx):.2f}"
    ry = f"{r * float(tf.sy):.2f}"
    # y is flipped on screen, so counterclockwise in the scene is sweep=1.
    sweep = 1 if arc.ccw else 0
    return f"M {x0} {y0} A {rx} {ry} 0 0 {sweep} {x1} {y1}"


def emit_svg(plans: Sequence[PathPlan], bounds: Optional[tuple] = None, title: str = "") -> str:
    if bounds is None:
        bounds = scene_bounds(plans)
    tf = _Transform(bounds)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
    ]
    if title:
        out.append(f'<title>{escape(title)}</title>')
    legend = sorted({p.puncture.description for p in plans})
    out.append('<g class="legend" font-family="sans-serif" font-size="16">')
    for i, line in enumerate(legend):
        out.append(f'<text x="{MARGIN}" y="{30 + 20 * i}">{escape(line)}</text>')
    out.append("</g>")

    for k, plan in enumerate(plans):
        color = COLORS[k % len(COLORS)]
        out.append(f'<g class="plan" data-method="{escape(plan.method)}" stroke="{color}" fill="none" stroke-width="2">')
        arcs = [s for s in plan.segments if isinstance(s, CircleArc)]
        if plan.segments and not arcs:
            pts = " ".join(",".join(tf(*p.render()[:2])) for p in plan.waypoints)
            out.append(f'<polyline points="{pts}"/>')
        for seg in plan.segments:
            if isinstance(seg, CircleArc):
                out.append(f'<path d="{_arc_path(seg, tf)}"/>')
        for seg in arcs[:1]:
            for e in seg.excluded:
                x, y = tf(*e)
                out.append(
                    f'<path class="excluded" d="M {_num(Fraction(x) - 5)} {_num(Fraction(y) - 5)} '
                    f'L {_num(Fraction(x) + 5)} {_num(Fraction(y) + 5)} '
                    f'M {_num(Fraction(x) - 5)} {_num(Fraction(y) + 5)} '
                    f'L {_num(Fraction(x) + 5)} {_num(Fraction(y) - 5)}" stroke="#777"/>'
                )
        out.append("</g>")
        for label, p in (("N", plan.start), ("N′", plan.end)):
            x, y = tf(*p.render()[:2])
            out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="{color}"/>')
            out.append(
                f'<text x="{_num(Fraction(x) + 8)}" y="{_num(Fraction(y) - 8)}" '
                f'font-family="sans-serif" font-size="18" fill="{color}">{label}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def segment_count(svg: str) -> int:
    """Number of straight legs across all polylines in an emitted document."""
    total = 0
    for chunk in svg.split('<polyline points="')[1:]:
        total += len(chunk.split('"', 1)[0].split()) - 1
    return total

