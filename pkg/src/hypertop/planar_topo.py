"""Event points on s^2 = p(t) and the topology graph of the image curve.

The graph G_G of the Weierstrass curve is built from vertical lines through
every event t-value and one rational line between consecutive events; each
interval where p > 0 carries one edge per branch.  Vertices are sent through
the map (or through limits at poles, base points and the places at
infinity), coincident images are merged exactly, and straight-line edge
crossings are removed by subdividing edges at further curve points.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .algfield import FElem, Limit, PointField, component_limit
from .certify import Coord, Grouping, group_coincident, images_equal
from .curvedef import (CElem, HMap, MapComponent, NotBirational, WeierstrassCurve,
                       birational_check, component_base_points, pole_points)
from .eliminants import XiData, build_xi, substitute_on_curve
from .exactpoly import UPoly, upoly_gcd
from .graph import Edge, TopoGraph, Vertex, find_conflicts
from .numeric import FloatMap, sample_arc
from .realalg import (AlgNum, Branch, GPoint, IdenticallyZeroOnCurve, compare, sign_at,
                      solve_on_curve, sort_algnums)

log = logging.getLogger(__name__)

__all__ = [
    "CRITICAL", "LOCAL_RAM", "SELF_INT", "POLE", "BASE", "COINCIDENCE",
    "EventPoint", "critical_points_G", "build_xi", "local_ram_candidates",
    "self_int_candidates", "place_image", "base_point_limits", "infinity_points",
    "compute_topology", "topology2d", "CrossingRepairFailed",
]

CRITICAL = "CriticalG"
LOCAL_RAM = "LocalRamCandidate"
SELF_INT = "SelfIntCandidate"
POLE = "Pole"
BASE = "BasePoint"
COINCIDENCE = "LimitCoincidence"


class CrossingRepairFailed(RuntimeError):
    pass


# --------------------------------------------------------------------------
# events
# --------------------------------------------------------------------------

@dataclass
class EventPoint:
    location: GPoint
    kinds: set[str] = field(default_factory=set)
    info: dict[str, Any] = field(default_factory=dict)


class EventSet:
    """Events keyed by exact point identity."""

    def __init__(self):
        self.events: list[EventPoint] = []

    def find(self, q: GPoint) -> EventPoint | None:
        for ev in self.events:
            if ev.location.branch is q.branch and compare(ev.location.t, q.t) == 0:
                return ev
        return None

    def add(self, q: GPoint, kind: str, **info) -> EventPoint:
        ev = self.find(q)
        if ev is None:
            ev = EventPoint(q)
            self.events.append(ev)
        ev.kinds.add(kind)
        for k, v in info.items():
            if isinstance(v, set):
                ev.info.setdefault(k, set()).update(v)
            else:
                ev.info[k] = v
        return ev

    def __iter__(self):
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)


def critical_points_G(curve: WeierstrassCurve) -> list[GPoint]:
    """The points (t, 0) of the curve, ascending in t."""
    return [GPoint(r, Branch.ZERO) for r in curve.real_roots()]


def derivative_numerator(comp: MapComponent, p: UPoly) -> CElem:
    """Numerator of x_t g_s - x_s g_t for x = comp and g = s^2 - p(t)."""
    N, D = comp.num, comp.den
    s = CElem.of(0, 1)
    dt = N.dt().mul(D, p) - N.mul(D.dt(), p)
    ds = N.ds().mul(D, p) - N.mul(D.ds(), p)
    return s.mul(dt, p).scale(2) + ds.scale(p.derivative())


def local_ram_candidates(hmap: HMap, curve: WeierstrassCurve) -> list[tuple[GPoint, str]]:
    """Points where the image has a vertical tangent or is locally singular.

    Each point carries 'ram' (only the x-derivative along the curve
    vanishes), 'local-sing' (the y-derivative vanishes too) or
    'undetermined' (y has a pole there).  Poles of x are left to the pole
    analysis.
    """
    p = curve.p
    cx, cy = hmap.components[0], hmap.components[1]
    E = derivative_numerator(cx, p)
    if E.is_zero():
        raise IdenticallyZeroOnCurve("x is constant on the curve")
    Ey = derivative_numerator(cy, p)
    out = []
    for q in solve_on_curve((E.u, E.v), p):
        if cx.den.vanishes_at(q, p):
            continue
        if cy.den.vanishes_at(q, p):
            state = "undetermined"
        elif Ey.vanishes_at(q, p):
            state = "local-sing"
        else:
            state = "ram"
        out.append((q, state))
    return out


def self_int_candidates(hmap: HMap, curve: WeierstrassCurve, xi: XiData) -> list[GPoint]:
    """Solutions on the curve of sres1(x(t, s), y(t, s)) = 0 away from poles."""
    p = curve.p
    cx, cy = hmap.components[0], hmap.components[1]
    s1, _ = xi.sres()
    if s1.is_zero():
        raise NotBirational("first principal subresultant vanishes identically")
    M = substitute_on_curve(s1, cx, cy, p)
    if M.is_zero():
        raise NotBirational("sres1 vanishes identically on the image")
    pts = solve_on_curve((M.u, M.v), p)
    # the t-gcd cannot see two sheets over one t with a common image: both
    # components take equal values at s and -s where a2 b1 - a1 b2 vanishes
    w = upoly_gcd(cx.a2 * cx.b1 - cx.a1 * cx.b2, cy.a2 * cy.b1 - cy.a1 * cy.b2)
    if w.deg > 0:
        for q in solve_on_curve((w, UPoly()), p):
            if q.branch.sign != 0 and not any(q.same_as(r) for r in pts):
                pts.append(q)
    return [q for q in pts if not (cx.den.vanishes_at(q, p) or cy.den.vanishes_at(q, p))]


# --------------------------------------------------------------------------
# images of places
# --------------------------------------------------------------------------

@dataclass
class PlaceImage:
    coords: list[Coord | None]
    limits: list[Limit | None]
    field: PointField

    @property
    def finite(self) -> bool:
        return all(c is not None for c in self.coords)

    def side_signs(self, side: str) -> list[int | None]:
        return [None if c is not None else lim.side_signs()[side]
                for c, lim in zip(self.coords, self.limits)]


def place_image(q: GPoint, hmap: HMap, p: UPoly) -> PlaceImage:
    F = PointField.at(q, p)
    coords: list[Coord | None] = []
    limits: list[Limit | None] = []
    for comp in hmap.components:
        D = F.elem(comp.b1, comp.b2)
        if not D.is_zero():
            coords.append(Coord(F.elem(comp.a1, comp.a2), D))
            limits.append(None)
            continue
        L = component_limit(comp, q, p, F)
        limits.append(L)
        coords.append(Coord(L.value()) if L.is_finite else None)
    return PlaceImage(coords, limits, F)


def base_point_limits(q: GPoint, hmap: HMap, curve: WeierstrassCurve) -> dict:
    """Per-side limits of every component at a base point or pole.

    Returns a dict side -> list whose entries are a finite ``Coord`` or the
    sign (+1/-1) of a diverging coordinate.
    """
    img = place_image(q, hmap, curve.p)
    sides = ("Plus", "Minus") if q.branch is Branch.ZERO else ("left", "right")
    out = {}
    for side in sides:
        signs = img.side_signs(side)
        out[side] = [c if c is not None else sg for c, sg in zip(img.coords, signs)]
    return out


# --------------------------------------------------------------------------
# places at infinity
# --------------------------------------------------------------------------

@dataclass
class InfinityEnd:
    direction: int            # +1 for t -> +inf, -1 for t -> -inf
    sigma: int                # sign of s along the branch
    real: bool
    place: int
    orders: list[int]         # doubled vanishing orders (negative: pole)
    coords: list[Coord | None]
    signs: list[int | None]

    @property
    def finite(self) -> bool:
        return all(o >= 0 for o in self.orders)

    @property
    def tag(self) -> str:
        return f"{'+' if self.direction > 0 else '-'}inf/{'Plus' if self.sigma > 0 else 'Minus'}"


@dataclass
class InfinityAnalysis:
    ends: list[InfinityEnd]
    affine: bool
    real_ends: list[InfinityEnd]
    local_sing: dict[int, str] = field(default_factory=dict)


def _lead(u: UPoly, v: UPoly, pd: UPoly, F: PointField | None) -> tuple[int, FElem | None]:
    """Doubled degree and leading coefficient of u + s v as t -> +inf."""
    n = pd.deg
    Du = 2 * u.deg if not u.is_zero() else None
    Dw = 2 * v.deg + n if not v.is_zero() else None
    if Du is None and Dw is None:
        raise ZeroDivisionError("zero function")
    if Dw is None or (Du is not None and Du > Dw):
        return Du, (F.elem(u.lc) if F else None)
    if Du is None or Dw > Du:
        return Dw, (F.elem(0, v.lc) if F else None)
    if F is None:
        return Du, None
    z = F.elem(u.lc, v.lc)
    if not z.is_zero():
        return Du, z
    W = u * u - pd * v * v
    return 2 * W.deg - Du, F.elem(W.lc) / F.elem(u.lc, -v.lc)


def infinity_points(hmap: HMap, curve: WeierstrassCurve) -> InfinityAnalysis:
    """Limits of the map along the real (and formal complex) ends t -> +-inf."""
    p = curve.p
    n = p.deg
    ends: list[InfinityEnd] = []
    for d in (1, -1):
        pd = p if d == 1 else p.reflect()
        real = pd.lc > 0
        if n % 2 == 1 and not real:
            continue  # same place as the real direction
        for sigma in (1, -1):
            if n % 2 == 1:
                place = 0
            else:
                place = sigma * (d ** (n // 2))
            F = PointField(AlgNum.rational(0), sigma, UPoly([pd.lc])) if real else None
            orders, coords, signs = [], [], []
            for comp in hmap.components:
                parts = [comp.a1, comp.a2, comp.b1, comp.b2]
                if d == -1:
                    parts = [x.reflect() for x in parts]
                a1, a2, b1, b2 = parts
                if a1.is_zero() and a2.is_zero():
                    orders.append(1 << 30)
                    coords.append(Coord(F.elem(0)) if F else None)
                    signs.append(None)
                    continue
                Dn, cn = _lead(a1, a2, pd, F)
                Dd, cd = _lead(b1, b2, pd, F)
                e2 = Dd - Dn
                orders.append(e2)
                if not real:
                    coords.append(None)
                    signs.append(None)
                elif e2 > 0:
                    coords.append(Coord(F.elem(0)))
                    signs.append(None)
                elif e2 == 0:
                    coords.append(Coord(cn, cd))
                    signs.append(None)
                else:
                    coords.append(None)
                    signs.append((cn / cd).sign())
            ends.append(InfinityEnd(d, sigma, real, place, orders, coords, signs))
    affine = all(e.finite for e in ends) if ends else True
    res = InfinityAnalysis(ends, affine, [e for e in ends if e.real])
    for e in res.real_ends:
        if e.finite and e.place not in res.local_sing:
            res.local_sing[e.place] = _infinity_local_sing(e, hmap, p)
    return res


def _infinity_local_sing(e: InfinityEnd, hmap: HMap, p: UPoly) -> str:
    """'yes'/'no' when all limit coordinates are rational, else 'undetermined'."""
    n = p.deg
    pd = p if e.direction == 1 else p.reflect()
    ords = []
    for comp, c in zip(hmap.components, e.coords):
        val = c.algnum()
        if not val.is_rational:
            return "undetermined"
        x0 = val.value
        parts = [comp.a1 - comp.b1 * x0, comp.a2 - comp.b2 * x0, comp.b1, comp.b2]
        if e.direction == -1:
            parts = [x.reflect() for x in parts]
        if parts[0].is_zero() and parts[1].is_zero():
            ords.append(math.inf)
            continue
        F = PointField(AlgNum.rational(0), e.sigma, UPoly([pd.lc]))
        Dn, _ = _lead(parts[0], parts[1], pd, F)
        Dd, _ = _lead(parts[2], parts[3], pd, F)
        e2 = Dd - Dn
        ords.append(e2 if n % 2 else e2 / 2)
    return "yes" if min(ords) >= 2 else "no"


# --------------------------------------------------------------------------
# helper: preimages of a given image point
# --------------------------------------------------------------------------

def preimage_candidates(coords: list[Coord], hmap: HMap, p: UPoly) -> list[GPoint]:
    """Superset of the real points of the curve mapping to ``coords``."""
    order = sorted(range(len(coords)), key=lambda k: coords[k].algnum().defpoly.deg)
    for k in order:
        comp = hmap.components[k]
        R = coords[k].algnum().defpoly
        N, D = comp.num, comp.den
        deg = R.deg
        npow = [CElem.of(1)]
        dpow = [CElem.of(1)]
        for _ in range(deg):
            npow.append(npow[-1].mul(N, p))
            dpow.append(dpow[-1].mul(D, p))
        E = CElem.of(0)
        for i, r in enumerate(R.c):
            if r:
                E = E + npow[i].mul(dpow[deg - i], p).scale(r)
        if E.is_zero():
            continue
        return solve_on_curve((E.u, E.v), p)
    return []


# --------------------------------------------------------------------------
# parameters along an edge
# --------------------------------------------------------------------------

def _inner_hi(a) -> Fraction:
    return a if isinstance(a, Fraction) else (a.value if a.is_rational else a.hi)


def _inner_lo(b) -> Fraction:
    return b if isinstance(b, Fraction) else (b.value if b.is_rational else b.lo)


def mid_param(a, b) -> Fraction:
    """A rational strictly between parameters a < b (None means infinite)."""
    if a is None and b is None:
        return Fraction(0)
    if a is None:
        hb = _inner_lo(b)
        return hb - max(Fraction(1), abs(hb))
    if b is None:
        ha = _inner_hi(a)
        return ha + max(Fraction(1), abs(ha))
    for _ in range(400):
        lo, hi = _inner_hi(a), _inner_lo(b)
        if lo < hi:
            if isinstance(a, AlgNum) and not a.is_rational and a.hi - a.lo > (hi - lo) / 8:
                a.bisect_once()
                continue
            if isinstance(b, AlgNum) and not b.is_rational and b.hi - b.lo > (hi - lo) / 8:
                b.bisect_once()
                continue
            return (lo + hi) / 2
        if isinstance(a, AlgNum):
            a.bisect_once()
        if isinstance(b, AlgNum):
            b.bisect_once()
    raise ArithmeticError("parameters are not separated")


def _as_float(t) -> float:
    if t is None:
        return math.nan
    return float(t)


def _param_str(t, digits: int) -> str:
    if t is None:
        return "inf"
    if isinstance(t, Fraction):
        return str(t) if t.denominator < 10 ** 6 else f"{float(t):.{digits}g}"
    return t.decimal(digits)


# --------------------------------------------------------------------------
# assembly
# --------------------------------------------------------------------------

@dataclass
class Place:
    key: tuple
    gpoint: GPoint | None
    end: InfinityEnd | None
    image: PlaceImage | None
    roles: set[str] = field(default_factory=set)

    @property
    def finite(self) -> bool:
        if self.end is not None:
            return self.end.finite
        return self.image.finite

    @property
    def coords(self) -> list[Coord]:
        return self.end.coords if self.end is not None else self.image.coords

    def provenance(self, p: UPoly, digits: int) -> dict:
        if self.end is not None:
            return {"end": self.end.tag, "place_at_infinity": self.end.place}
        q = self.gpoint
        t_app, s_app = q.approx(p)
        return {"t": q.t.to_json(), "t_approx": round(t_app, 12), "s_approx": round(s_app, 12),
                "branch": q.branch.value}


@dataclass
class GGEdge:
    a: tuple          # place key
    b: tuple
    ta: Any           # parameter of a (Fraction, AlgNum, or None for -inf)
    tb: Any
    sigma: int


@dataclass
class Topology:
    graph: TopoGraph
    events: EventSet
    places: dict
    classes: list[list[tuple]]
    grouping: Grouping
    infinity: InfinityAnalysis
    gg_edges: list[GGEdge]
    vertex_coords: dict[int, list[Coord]]
    xi: XiData | None = None
    timings: dict[str, float] = field(default_factory=dict)


class _Timer:
    def __init__(self):
        self.t = {}
        self._s = time.perf_counter()

    def lap(self, name: str) -> None:
        now = time.perf_counter()
        self.t[name] = round(now - self._s, 4)
        self._s = now


def _line_points(t, p: UPoly) -> list[GPoint]:
    alpha = t if isinstance(t, AlgNum) else AlgNum.rational(t)
    sg = sign_at(p, alpha)
    if sg > 0:
        return [GPoint(alpha, Branch.PLUS), GPoint(alpha.copy(), Branch.MINUS)]
    if sg == 0:
        return [GPoint(alpha, Branch.ZERO)]
    return []


def _unique_sorted(ts: list[AlgNum]) -> list[AlgNum]:
    out: list[AlgNum] = []
    for a in sort_algnums(ts):
        if out and compare(out[-1], a) == 0:
            continue
        out.append(a)
    return out


def compute_topology(hmap: HMap, curve: WeierstrassCurve, *, certify: bool = True,
                     seed: int = 0, repair: bool = True, digits: int = 6,
                     check_birational: bool = True, event_map: HMap | None = None,
                     polylines: bool = True) -> Topology:
    """Events, images and the topology graph of the image of s^2 = p(t)."""
    p = curve.p
    emap = event_map or hmap
    timer = _Timer()
    warnings: list[str] = []
    if check_birational and not birational_check(emap, curve, seed=seed):
        raise NotBirational("the map is not birational onto its image")
    timer.lap("birational_check")

    events = EventSet()
    for q in critical_points_G(curve):
        events.add(q, CRITICAL)
    xi = build_xi(emap, curve)
    timer.lap("xi")
    for q, state in local_ram_candidates(emap, curve):
        events.add(q, LOCAL_RAM, local_ram=state)
    timer.lap("local_ram")
    for q in self_int_candidates(emap, curve, xi):
        events.add(q, SELF_INT)
    timer.lap("self_int")
    for k, comp in enumerate(hmap.components):
        for q in component_base_points(comp, curve):
            events.add(q, BASE, components={k})
        for q in pole_points(comp, curve):
            events.add(q, POLE, components={k})
    timer.lap("poles")

    places: dict[tuple, Place] = {}
    event_keys: list[tuple] = []
    for ev in events:
        key = ("g", len(places))
        places[key] = Place(key, ev.location, None, place_image(ev.location, hmap, p), set(ev.kinds))
        event_keys.append(key)

    inf = infinity_points(hmap, curve)
    for e in inf.real_ends:
        key = ("inf", e.tag)
        places[key] = Place(key, None, e, None, {"infinity_end"})
    if inf.affine and not inf.real_ends and inf.ends:
        warnings.append("the places at infinity are complex with a finite common image; "
                        "the resulting isolated point is not part of the graph")
    timer.lap("infinity")

    # other real points mapping onto finite limit images
    special = [pl for pl in places.values()
               if pl.finite and (pl.end is not None or BASE in pl.roles)]
    for pl in special:
        for q in preimage_candidates(pl.coords, hmap, p):
            if events.find(q) is not None:
                continue
            img = place_image(q, hmap, p)
            if img.finite and images_equal(img.coords, pl.coords):
                ev = events.add(q, COINCIDENCE)
                key = ("g", len(places))
                places[key] = Place(key, q, None, img, set(ev.kinds))
                event_keys.append(key)
    timer.lap("coincidences")

    # vertical lines
    ts = _unique_sorted([places[k].gpoint.t for k in event_keys])
    lines: list = []
    if not ts:
        lines = [Fraction(0)]
    else:
        lines.append(_inner_lo(ts[0]) - 1 if not ts[0].is_rational else ts[0].value - 1)
        lines[0] = Fraction(math.floor(lines[0]))
        for i, t in enumerate(ts):
            lines.append(t)
            if i + 1 < len(ts):
                lines.append(mid_param(t, ts[i + 1]))
        last = ts[-1]
        lines.append(Fraction(math.ceil(last.value if last.is_rational else last.hi) + 1))
    line_vertices: list[dict[int, tuple]] = []
    for li, t in enumerate(lines):
        row: dict[int, tuple] = {}
        for q in _line_points(t, p):
            ev = events.find(q) if isinstance(t, AlgNum) else None
            if ev is not None:
                key = next(k for k in event_keys if places[k].gpoint is ev.location)
            else:
                key = ("g", len(places))
                places[key] = Place(key, q, None, place_image(q, hmap, p), {"line_point"})
            if q.branch is Branch.ZERO:
                row[1] = row[-1] = key
            else:
                row[q.branch.sign] = key
        line_vertices.append(row)
    timer.lap("lines")

    # edges of G_G
    gg: list[GGEdge] = []
    for li in range(len(lines) - 1):
        ra, rb = line_vertices[li], line_vertices[li + 1]
        rational_t = lines[li] if isinstance(lines[li], Fraction) else lines[li + 1]
        if p(rational_t) <= 0 or not ra or not rb:
            continue
        for sigma in (1, -1):
            gg.append(GGEdge(ra[sigma], rb[sigma], lines[li], lines[li + 1], sigma))
    for e in inf.real_ends:
        row = line_vertices[-1] if e.direction > 0 else line_vertices[0]
        tline = lines[-1] if e.direction > 0 else lines[0]
        if not row:
            continue
        key = ("inf", e.tag)
        if e.direction > 0:
            gg.append(GGEdge(row[e.sigma], key, tline, None, e.sigma))
        else:
            gg.append(GGEdge(key, row[e.sigma], None, tline, e.sigma))
    timer.lap("gg")

    # merge coincident finite images
    finite_keys = [k for k, pl in places.items() if pl.finite]
    grouping = group_coincident([places[k].coords for k in finite_keys], certify=certify)
    if not certify:
        warnings.append("certification disabled: vertices merged by a 1e-8 proximity threshold")
    classes = [[finite_keys[i] for i in cls] for cls in grouping.classes]
    timer.lap("grouping")

    builder = _GraphBuilder(hmap, curve, places, classes, digits)
    builder.build(gg, repair=repair and hmap.dim == 2, polylines=polylines)
    timer.lap("assembly")

    graph = builder.graph
    si = any("self_intersection" in v.roles for v in graph.vertices)
    asym = any(pl.roles & {POLE, BASE} and not pl.finite for pl in places.values())
    bases = [pl for pl in places.values() if BASE in pl.roles]
    graph.metadata.update({
        "genus": curve.genus,
        "birational_check": "Birational" if check_birational else "skipped",
        "certification_mode": "exact" if certify else "threshold",
        "warnings": warnings,
        "flags": {
            "p_inf_affine": inf.affine,
            "self_intersection": si,
            "asymptotes": asym,
            "base_points": bool(bases),
        },
        "events": [_event_json(ev, p) for ev in events],
        "infinity": [{"end": e.tag, "real": e.real, "finite": e.finite, "place": e.place}
                     for e in inf.ends],
        "infinity_local_singularity": {str(k): v for k, v in inf.local_sing.items()},
        "counts": {"events": len(events), "gg_vertices": len(places), "gg_edges": len(gg)},
    })
    timer.lap("metadata")
    graph.metadata["timings"] = dict(timer.t)
    return Topology(graph, events, places, classes, grouping, inf, gg, builder.vertex_coords,
                    xi, dict(timer.t))


def _event_json(ev: EventPoint, p: UPoly) -> dict:
    t_app, s_app = ev.location.approx(p)
    out = {"t": ev.location.t.to_json(), "t_approx": round(t_app, 12),
           "s_approx": round(s_app, 12), "branch": ev.location.branch.value,
           "kinds": sorted(ev.kinds)}
    for k, v in ev.info.items():
        out[k] = sorted(v) if isinstance(v, set) else v
    return out


def topology2d(hmap: HMap, curve: WeierstrassCurve, **kw) -> Topology:
    if hmap.dim != 2:
        raise ValueError("topology2d needs a map with two components")
    return compute_topology(hmap, curve, **kw)


# --------------------------------------------------------------------------
# graph construction
# --------------------------------------------------------------------------

class _GraphBuilder:
    def __init__(self, hmap: HMap, curve: WeierstrassCurve, places: dict, classes, digits: int):
        self.hmap = hmap
        self.curve = curve
        self.p = curve.p
        self.places = places
        self.digits = digits
        self.fm = FloatMap(hmap, curve)
        self.graph = TopoGraph(hmap.dim)
        self.vertex_coords: dict[int, list[Coord]] = {}
        self.node_of_place: dict[tuple, int] = {}
        for cls in classes:
            vid = self._affine_vertex(cls)
            for k in cls:
                self.node_of_place[k] = vid

    # -- vertices ---------------------------------------------------------------
    def _rep(self, coords: list[Coord]) -> list[Fraction]:
        out = []
        for c in coords:
            e = c.enclosure()
            scale = max(abs(e.lo), abs(e.hi), Fraction(1))
            out.append(c.refine_to(scale * Fraction(1, 10 ** 12)).mid)
        return out

    def _affine_vertex(self, cls: list[tuple]) -> int:
        pls = [self.places[k] for k in cls]
        coords = pls[0].coords
        vid = len(self.graph.vertices)
        roles: set[str] = set()
        for pl in pls:
            roles |= pl.roles
        distinct = {(pl.end.place if pl.end is not None else pl.key) for pl in pls}
        if len(distinct) >= 2:
            roles.add("self_intersection")
        exact = [c.algnum().to_json() for c in coords]
        v = Vertex(vid, "affine", [c.decimal(self.digits) for c in coords], self._rep(coords), exact,
                   [pl.provenance(self.p, self.digits) for pl in pls], sorted(roles))
        self.graph.vertices.append(v)
        self.vertex_coords[vid] = coords
        return vid

    def _marker(self, place: Place, side: str, t_m: Fraction, sigma: int) -> int:
        vid = len(self.graph.vertices)
        if place.end is not None:
            signs = place.end.signs
            coords = place.end.coords
            prov = place.provenance(self.p, self.digits)
        else:
            signs = place.image.side_signs(side)
            coords = place.image.coords
            prov = dict(place.provenance(self.p, self.digits), side=side)
        labels = []
        for c, sg in zip(coords, signs):
            if c is not None:
                labels.append(c.decimal(self.digits))
            else:
                labels.append("+inf" if sg > 0 else "-inf")
        img = self.fm(float(t_m), sigma)
        rep = [Fraction(x) for x in img]
        roles = sorted(place.roles | {"infinity"})
        self.graph.vertices.append(Vertex(vid, "infinity", labels, rep, None, [prov], roles))
        return vid

    def _sub_vertex(self, t: Fraction, sigma: int) -> tuple[int, list[Coord]]:
        q = GPoint(AlgNum.rational(t), Branch.from_sign(sigma))
        img = place_image(q, self.hmap, self.p)
        vid = len(self.graph.vertices)
        coords = img.coords
        v = Vertex(vid, "affine", [c.decimal(self.digits) for c in coords], self._rep(coords),
                   [c.algnum().to_json() for c in coords],
                   [Place(("sub",), q, None, img).provenance(self.p, self.digits)], ["subdivision"])
        self.graph.vertices.append(v)
        self.vertex_coords[vid] = coords
        return vid, coords

    # -- marker parameters ---------------------------------------------------
    def _radius(self) -> float:
        r = 1.0
        for v in self.graph.vertices:
            if v.kind == "affine":
                r = max(r, max(abs(float(x)) for x in v.rep))
        return 4.0 * r

    def _far_param(self, anchor, target, sigma: int, R: float) -> Fraction:
        """A rational between anchor and target (a pole or infinity) with a far image."""
        if target is None or isinstance(target, str):
            direction = 1 if target in (None, "+") else -1
            base = _inner_hi(anchor) if direction > 0 else _inner_lo(anchor)
            step = max(Fraction(1), abs(base))
            t = base
            for _ in range(80):
                t = base + direction * step
                img = self.fm(float(t), sigma)
                if img is not None and max(abs(x) for x in img) > R:
                    return t
                step *= 2
            return t
        a = Fraction(anchor)
        above = compare(target, AlgNum.rational(a)) > 0
        if not target.is_rational:
            gap = abs(Fraction(target.approx(6)) - a)
            target.refine(max(gap, Fraction(1, 10 ** 30)) * Fraction(1, 1 << 64))
        b = _inner_lo(target) if above else _inner_hi(target)
        t = a
        for k in range(1, 60):
            t = a + (b - a) * (1 - Fraction(1, 1 << k))
            img = self.fm(float(t), sigma)
            if img is None or max(abs(x) for x in img) > R:
                return t
        return t

    # -- building ---------------------------------------------------------------
    def build(self, gg: list[GGEdge], repair: bool, polylines: bool) -> None:
        R = self._radius()
        # chain of (param, vertex id) per G_G edge
        chains: list[list[tuple[Any, int]]] = []
        ends_far: list[tuple[Any, Any]] = []
        for e in gg:
            chain = []
            far = [None, None]
            for which, key, t, other in ((0, e.a, e.ta, e.tb), (1, e.b, e.tb, e.ta)):
                pl = self.places[key]
                if pl.finite:
                    chain.append((t, self.node_of_place[key]))
                    continue
                if pl.end is not None:
                    target = "+" if pl.end.direction > 0 else "-"
                    side = "end"
                else:
                    target = t
                    if pl.gpoint.branch is Branch.ZERO:
                        side = "Plus" if e.sigma > 0 else "Minus"
                    else:
                        side = "left" if which == 1 else "right"
                t_m = self._far_param(other, target, e.sigma, R)
                far[which] = t
                chain.append((t_m, self._marker(pl, side, t_m, e.sigma)))
            chains.append(chain)
            ends_far.append(tuple(far))
        if repair:
            self._repair(gg, chains)
        for idx, (e, chain) in enumerate(zip(gg, chains)):
            for k in range(len(chain) - 1):
                (ta, va), (tb, vb) = chain[k], chain[k + 1]
                interval = (_param_str(ta, self.digits) if ta is not None else "-inf",
                            _param_str(tb, self.digits) if tb is not None else "+inf")
                poly = []
                if polylines:
                    poly = self._polyline(e.sigma, ta, tb, va, vb,
                                          ends_far[idx][0] if k == 0 else None,
                                          ends_far[idx][1] if k == len(chain) - 2 else None)
                self.graph.edges.append(Edge(va, vb, "Plus" if e.sigma > 0 else "Minus",
                                             interval, idx, poly))

    def _repair(self, gg: list[GGEdge], chains: list[list[tuple[Any, int]]]) -> None:
        for _round in range(32):
            points = {v.id: (v.rep[0], v.rep[1]) for v in self.graph.vertices}
            segs, where = [], []
            for ci, chain in enumerate(chains):
                for k in range(len(chain) - 1):
                    segs.append((chain[k][1], chain[k + 1][1]))
                    where.append((ci, k))
            bad = find_conflicts(points, segs)
            for i, (u, v) in enumerate(segs):
                if u == v or points[u] == points[v]:
                    bad.add(i)
            if not bad:
                return
            todo: dict[int, list[int]] = {}
            for i in bad:
                ci, k = where[i]
                todo.setdefault(ci, []).append(k)
            for ci, ks in todo.items():
                chain = chains[ci]
                sigma = gg[ci].sigma
                for k in sorted(set(ks), reverse=True):
                    t = mid_param(chain[k][0], chain[k + 1][0])
                    vid, _ = self._sub_vertex(t, sigma)
                    chain.insert(k + 1, (t, vid))
        raise CrossingRepairFailed("edge crossings persist after 32 subdivision rounds")

    def _polyline(self, sigma: int, ta, tb, va: int, vb: int, far_a, far_b) -> list[list[float]]:
        """Sampled image of the arc between two chain parameters."""
        big = 1e6
        fa = _as_float(ta) if ta is not None else -big
        fb = _as_float(tb) if tb is not None else big
        if ta is None:
            fa = min(fa, fb - big)
        if tb is None:
            fb = max(fb, fa + big)
        focus = self._radius()
        clip = 1e3 * focus
        pts = sample_arc(self.fm, sigma, fa, fb, clip=clip, focus=focus)
        # extend marker edges towards their pole so the arc is fully covered
        if far_b is not None and isinstance(far_b, (AlgNum, Fraction)):
            pts = pts + sample_arc(self.fm, sigma, fb, float(far_b) - 1e-12 * (1 + abs(float(far_b))),
                                   clip=clip, focus=focus)[1:]
        if far_a is not None and isinstance(far_a, (AlgNum, Fraction)):
            pts = sample_arc(self.fm, sigma, float(far_a) + 1e-12 * (1 + abs(float(far_a))), fa,
                             clip=clip, focus=focus)[:-1] + pts
        va_rep = [float(x) for x in self.graph.vertices[va].rep]
        vb_rep = [float(x) for x in self.graph.vertices[vb].rep]
        if self.graph.vertices[va].kind == "affine" and ta is None:
            pts = [va_rep] + pts
        if self.graph.vertices[vb].kind == "affine" and tb is None:
            pts = pts + [vb_rep]
        return pts
