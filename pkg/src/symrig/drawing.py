"""SVG 1.1 drawing of a lifted framework."""

from __future__ import annotations

import numpy as np

from .colored_graph import REFLECTION, ColoredGraph
from .geometry import group_matrix

SIZE = 400
MARGIN = 30
COLLAPSE_TOL = 1e-9


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def svg_text(g: ColoredGraph, points) -> str:
    """Every group image of every point and bar, the symmetry center or
    mirror, and collapsed bars in red."""
    P = np.asarray(points, dtype=float).reshape(g.n, 2)
    k = g.k
    mats = [group_matrix(g.group.kind, k, a) for a in range(k)]
    lifted = {(i, a): mats[a] @ P[i] for i in range(g.n) for a in range(k)}
    extent = max([1e-12] + [float(np.abs(v).max()) for v in lifted.values()])
    scale = (SIZE / 2 - MARGIN) / extent if extent > 1e-12 else 1.0

    def xy(v):
        # svg y axis points down
        return SIZE / 2 + scale * v[0], SIZE / 2 - scale * v[1]

    out = ['<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
           '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
           '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
           f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
           f'width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
           f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>']
    c = SIZE / 2
    if g.group.kind == REFLECTION:
        out.append(f'<line class="mirror" x1="{_fmt(c)}" y1="0" x2="{_fmt(c)}" y2="{SIZE}" '
                   f'stroke="#888" stroke-dasharray="6,4"/>')
    else:
        out.append(f'<circle class="center" cx="{_fmt(c)}" cy="{_fmt(c)}" r="4" '
                   f'fill="none" stroke="#888"/>')
    for idx, e in enumerate(g.edges):
        for a in range(k):
            p = lifted[(e.tail, a)]
            q = lifted[(e.head, (a + e.color) % k)]
            bad = float(np.hypot(*(p - q))) <= COLLAPSE_TOL * max(extent, 1.0)
            (x1, y1), (x2, y2) = xy(p), xy(q)
            colour = "red" if bad else "black"
            cls = "bar collapsed" if bad else "bar"
            out.append(f'<line class="{cls}" data-edge="{idx}" data-copy="{a}" '
                       f'x1="{_fmt(x1)}" y1="{_fmt(y1)}" x2="{_fmt(x2)}" y2="{_fmt(y2)}" '
                       f'stroke="{colour}" stroke-width="2"/>')
    for (i, a), v in sorted(lifted.items()):
        x, y = xy(v)
        out.append(f'<circle class="joint" data-vertex="{i}" data-copy="{a}" '
                   f'cx="{_fmt(x)}" cy="{_fmt(y)}" r="5" fill="#1f5fbf"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(g: ColoredGraph, realization, path) -> str:
    """Write the drawing to ``path`` and return the text."""
    pts = realization.points if hasattr(realization, "points") else realization
    text = svg_text(g, pts)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
