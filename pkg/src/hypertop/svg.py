"""Deterministic SVG rendering of topology graphs."""

from __future__ import annotations

import math

from .graph import TopoGraph

_COS30 = math.cos(math.pi / 6)
_SIN30 = 0.5


class EmptyGraph(ValueError):
    """The graph has no vertices to draw."""


def _project(pt, dim: int) -> tuple[float, float]:
    """Screen coordinates before scaling; 3D points use an isometric view."""
    if dim == 2:
        return float(pt[0]), -float(pt[1])
    x, y, z = (float(c) for c in pt[:3])
    return (x - y) * _COS30, -(z - (x + y) * _SIN30)


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def emit_svg(g: TopoGraph, width: int = 800, height: int = 800, margin: float = 0.05,
             vertex_radius: float = 3.0) -> str:
    """SVG text for ``g``: polylines for edges, circles for vertices, arrows at infinity.

    The view box is fitted to the vertices (markers included) with a
    ``margin`` fraction on every side; output depends only on the graph.
    """
    if not g.vertices:
        raise EmptyGraph("cannot draw a graph without vertices")
    pts = {v.id: _project(v.rep, g.dim) for v in g.vertices}
    xs = [p[0] for p in pts.values()]
    ys = [p[1] for p in pts.values()]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    inner = (1 - 2 * margin) * min(width, height)
    k = inner / span

    def screen(p) -> tuple[float, float]:
        return width / 2 + (p[0] - cx) * k, height / 2 + (p[1] - cy) * k

    limit = 4 * max(width, height)

    def clipped(p) -> bool:
        return abs(p[0] - width / 2) <= limit and abs(p[1] - height / 2) <= limit

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}">',
           '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="8" '
           'markerHeight="8" orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" '
           'fill="#444"/></marker></defs>',
           f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>']
    kinds = {v.id: v.kind for v in g.vertices}
    for e in g.edges:
        raw = e.polyline if e.polyline else [g.vertices[e.a].rep, g.vertices[e.b].rep]
        seq = [screen(_project(p, g.dim)) for p in raw]
        seq = [p for p in seq if clipped(p)]
        a, b = screen(pts[e.a]), screen(pts[e.b])
        if kinds[e.a] == "affine":
            seq = [a] + seq
        if kinds[e.b] == "affine":
            seq = seq + [b]
        if len(seq) < 2:
            seq = [a, b]
        attrs = ""
        if kinds[e.b] == "infinity":
            attrs += ' marker-end="url(#arrow)"'
        if kinds[e.a] == "infinity":
            attrs += ' marker-start="url(#arrow)"'
        d = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in seq)
        out.append(f'<polyline points="{d}" fill="none" stroke="#1f5fa8" stroke-width="1.2"{attrs}/>')
    for v in g.vertices:
        if v.kind != "affine":
            continue
        x, y = screen(pts[v.id])
        if "self_intersection" in v.roles:
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(2 * vertex_radius)}" '
                       f'fill="#d62728" stroke="black" stroke-width="0.8"/>')
        else:
            out.append(f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" r="{_fmt(vertex_radius)}" '
                       f'fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
