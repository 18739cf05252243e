"""Topology graph container, serialisation and planar segment geometry."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class Vertex:
    id: int
    kind: str                      # "affine" or "infinity"
    coords: list[str]              # decimal strings; "+inf"/"-inf" entries for markers
    rep: list[Fraction]            # rational representative used for geometry
    exact: list[dict] | None = None
    provenance: list[dict] = field(default_factory=list)
    roles: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"id": self.id, "kind": self.kind, "coords": self.coords,
                "position": [round(float(x), 12) for x in self.rep],
                "exact": self.exact, "provenance": self.provenance, "roles": sorted(set(self.roles))}


@dataclass
class Edge:
    a: int
    b: int
    branch: str
    interval: tuple[str, str]
    source_edge: int
    polyline: list[list[float]] = field(default_factory=list)

    def to_json(self, with_polyline: bool = True) -> dict:
        out = {"from": self.a, "to": self.b, "branch": self.branch,
               "source_interval_in_t": list(self.interval), "source_edge": self.source_edge}
        if with_polyline:
            out["polyline"] = [[round(x, 12) for x in pt] for pt in self.polyline]
        return out


@dataclass
class TopoGraph:
    dim: int
    vertices: list[Vertex] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_json(self, with_polyline: bool = True) -> dict:
        return {"schema_version": SCHEMA_VERSION, "dim": self.dim,
                "vertices": [v.to_json() for v in self.vertices],
                "edges": [e.to_json(with_polyline) for e in self.edges],
                "metadata": self.metadata}

    def dumps(self, with_polyline: bool = True) -> str:
        return json.dumps(self.to_json(with_polyline), indent=1, sort_keys=True)

    def to_dot(self) -> str:
        lines = ["graph C {"]
        for v in self.vertices:
            label = "(" + ", ".join(v.coords) + ")"
            shape = "box" if v.kind == "infinity" else (
                "doublecircle" if "self_intersection" in v.roles else "circle")
            lines.append(f'  v{v.id} [label="{label}", shape={shape}];')
        for e in self.edges:
            lines.append(f'  v{e.a} -- v{e.b} [label="{e.branch}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"

    # -- graph invariants ------------------------------------------------------
    def components_and_cycles(self) -> tuple[int, int]:
        return components_and_cycles(len(self.vertices), [(e.a, e.b) for e in self.edges])

    def degree(self, vid: int) -> int:
        return sum((e.a == vid) + (e.b == vid) for e in self.edges)


def components_and_cycles(n: int, edges: list[tuple[int, int]]) -> tuple[int, int]:
    """Number of connected components and of independent cycles (first Betti number)."""
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb
    comps = len({find(k) for k in range(n)})
    return comps, len(edges) - n + comps


def load_graph(data: dict) -> TopoGraph:
    g = TopoGraph(data["dim"], metadata=data.get("metadata", {}))
    for v in data["vertices"]:
        if "position" in v:
            rep = [Fraction(x) for x in v["position"]]
        else:
            rep = []
            for c in v["coords"]:
                try:
                    rep.append(Fraction(c))
                except ValueError:
                    rep.append(Fraction(0))
        g.vertices.append(Vertex(v["id"], v["kind"], v["coords"], rep, v.get("exact"),
                                 v.get("provenance", []), v.get("roles", [])))
    for k, e in enumerate(data["edges"]):
        g.edges.append(Edge(e["from"], e["to"], e["branch"], tuple(e["source_interval_in_t"]),
                            e.get("source_edge", k), e.get("polyline", [])))
    return g


# --------------------------------------------------------------------------
# exact segment geometry
# --------------------------------------------------------------------------

def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, c) -> bool:
    """c collinear with a-b lies within the closed segment."""
    return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])


def segments_conflict(a, b, c, d, shared: int) -> bool:
    """Whether segments ab and cd meet anywhere other than a shared endpoint.

    ``shared`` counts endpoints the segments have in common as graph vertices
    (0 or 1; two shared endpoints means a double edge, handled by the caller).
    With one shared endpoint it must be a == c (callers normalise); the
    segments then conflict only when they overlap along a common line.
    """
    if shared:
        if _orient(a, b, d) != 0:
            return False
        # collinear: conflict iff they point the same way from a
        return (b[0] - a[0]) * (d[0] - a[0]) + (b[1] - a[1]) * (d[1] - a[1]) > 0
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    if o1 == 0 and _on_segment(a, b, c):
        return True
    if o2 == 0 and _on_segment(a, b, d):
        return True
    if o3 == 0 and _on_segment(c, d, a):
        return True
    if o4 == 0 and _on_segment(c, d, b):
        return True
    return False


def _bbox(a, b):
    return (min(a[0], b[0]), max(a[0], b[0]), min(a[1], b[1]), max(a[1], b[1]))


def find_conflicts(points: dict, segs: list[tuple[Any, Any]]) -> set[int]:
    """Indices of segments that meet another segment away from shared endpoints.

    ``points`` maps node keys to rational 2D points and ``segs`` lists
    (key, key) pairs.
    """
    boxes = [_bbox(points[u], points[v]) for u, v in segs]
    fboxes = [tuple(float(x) for x in bx) for bx in boxes]
    order = sorted(range(len(segs)), key=lambda k: fboxes[k][0])
    bad: set[int] = set()
    for ii, i in enumerate(order):
        bi = fboxes[i]
        for j in order[ii + 1:]:
            bj = fboxes[j]
            if bj[0] > bi[1] + 1e-9 * (1 + abs(bi[1])):
                break
            if bj[3] < bi[2] - 1e-9 * (1 + abs(bi[2])) or bj[2] > bi[3] + 1e-9 * (1 + abs(bi[3])):
                continue
            u1, v1 = segs[i]
            u2, v2 = segs[j]
            common = {u1, v1} & {u2, v2}
            if len(common) == 2:
                if u1 == v1:
                    continue
                # parallel edges between the same two vertices
                bad.add(i)
                bad.add(j)
                continue
            if common:
                s = next(iter(common))
                o1 = v1 if u1 == s else u1
                o2 = v2 if u2 == s else u2
                if segments_conflict(points[s], points[o1], points[s], points[o2], 1):
                    bad.update((i, j))
                continue
            if segments_conflict(points[u1], points[v1], points[u2], points[v2], 0):
                bad.update((i, j))
    return bad


def point_segment_distance(p, a, b) -> float:
    ax, ay = a[0], a[1]
    bx, by = b[0], b[1]
    dx, dy = bx - ax, by - ay
    L = dx * dx + dy * dy
    if L == 0:
        return math.hypot(p[0] - ax, p[1] - ay)
    u = ((p[0] - ax) * dx + (p[1] - ay) * dy) / L
    u = min(1.0, max(0.0, u))
    return math.hypot(p[0] - ax - u * dx, p[1] - ay - u * dy)
