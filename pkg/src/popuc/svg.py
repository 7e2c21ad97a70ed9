"""Static unit-circle diagrams.

Each point set is drawn on its own ring just outside (first set) or inside
(later sets) the unit circle, with its own marker shape and colour. Common
points get a double ring on the circle itself; padding points are hollow.
Output depends only on the input, so identical calls give identical bytes.
"""
from __future__ import annotations

from html import escape
from pathlib import Path
from typing import Sequence

import numpy as np

from popuc.circle import CircularPointSet

SIZE = 480
CENTER = SIZE / 2
RADIUS = 160.0
RING_STEP = 18.0
MARKER = 6.0
COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
SHAPES = ("circle", "square", "triangle", "diamond")


def _f(x: float) -> str:
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


def _xy(theta: float, r: float) -> tuple[float, float]:
    # y axis points down in SVG
    return CENTER + r * np.cos(theta), CENTER - r * np.sin(theta)


def _marker(shape: str, x: float, y: float, colour: str, cls: str, hollow: bool = False) -> str:
    fill = "none" if hollow else colour
    style = f'class="{cls}" fill="{fill}" stroke="{colour}" stroke-width="1.5"'
    s = MARKER
    if shape == "circle":
        return f'<circle {style} cx="{_f(x)}" cy="{_f(y)}" r="{_f(s)}"/>'
    if shape == "square":
        return f'<rect {style} x="{_f(x - s)}" y="{_f(y - s)}" width="{_f(2 * s)}" height="{_f(2 * s)}"/>'
    if shape == "triangle":
        pts = [(x, y - s * 1.2), (x - s, y + s * 0.8), (x + s, y + s * 0.8)]
    else:
        pts = [(x, y - s * 1.3), (x + s, y), (x, y + s * 1.3), (x - s, y)]
    return f'<polygon {style} points="{" ".join(f"{_f(a)},{_f(b)}" for a, b in pts)}"/>'


def _ring_radius(k: int) -> float:
    # first set outside the circle, the rest stepping inwards
    return RADIUS + RING_STEP if k == 0 else RADIUS - RING_STEP * k


def render_svg(sets: Sequence[CircularPointSet], common: CircularPointSet | None = None,
               padding: CircularPointSet | None = None, title: str = "") -> str:
    """SVG text for the given sets.

    ``common`` defaults to the points shared by every set when there are at
    least two sets; pass an empty set to suppress the double rings.
    """
    sets = list(sets)
    if not any(len(s) for s in sets):
        raise ValueError("at least one nonempty set is required")
    if common is None and len(sets) >= 2:
        common = sets[0]
        for s in sets[1:]:
            common = common.intersect(s)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE + 24 * len(sets)}" '
        f'viewBox="0 0 {SIZE} {SIZE + 24 * len(sets)}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE + 24 * len(sets)}" fill="white"/>',
    ]
    if title:
        out.append(f'<text x="{_f(CENTER)}" y="20" text-anchor="middle" font-family="sans-serif" '
                   f'font-size="14">{escape(title)}</text>')
    out.append(f'<circle class="unit-circle" cx="{_f(CENTER)}" cy="{_f(CENTER)}" r="{_f(RADIUS)}" '
               'fill="none" stroke="#444" stroke-width="1"/>')
    out.append(f'<line x1="{_f(CENTER - 4)}" y1="{_f(CENTER)}" x2="{_f(CENTER + 4)}" y2="{_f(CENTER)}" stroke="#999"/>')
    out.append(f'<line x1="{_f(CENTER)}" y1="{_f(CENTER - 4)}" x2="{_f(CENTER)}" y2="{_f(CENTER + 4)}" stroke="#999"/>')
    for k, s in enumerate(sets):
        colour, shape = COLOURS[k % len(COLOURS)], SHAPES[k % len(SHAPES)]
        r = _ring_radius(k)
        for t in s.angles:
            cx, cy = _xy(t, RADIUS)
            x, y = _xy(t, r)
            out.append(f'<line x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(x)}" y2="{_f(y)}" stroke="{colour}" '
                       'stroke-width="0.75"/>')
            out.append(_marker(shape, x, y, colour, f"marker set-{k}"))
    if common is not None:
        for t in common.angles:
            x, y = _xy(t, RADIUS)
            rings = "".join(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(rr)}"/>'
                            for rr in (MARKER + 2, MARKER + 5))
            out.append(f'<g class="common" fill="none" stroke="black" stroke-width="1.2">{rings}</g>')
    if padding is not None:
        for t in padding.angles:
            x, y = _xy(t, RADIUS)
            out.append(_marker("circle", x, y, "#555", "padding", hollow=True))
    legend_y = SIZE
    for k, s in enumerate(sets):
        colour, shape = COLOURS[k % len(COLOURS)], SHAPES[k % len(SHAPES)]
        y = legend_y + 24 * k
        out.append(_marker(shape, 24.0, y, colour, f"legend set-{k}"))
        out.append(f'<text x="40" y="{_f(y + 5)}" font-family="sans-serif" font-size="13">'
                   f'{escape(s.label or f"set {k}")} ({len(s)})</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(sets: Sequence[CircularPointSet], path: str | Path,
             common: CircularPointSet | None = None,
             padding: CircularPointSet | None = None, title: str = "") -> Path:
    path = Path(path)
    path.write_text(render_svg(sets, common, padding, title))
    return path
