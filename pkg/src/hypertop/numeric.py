"""Floating-point evaluation of maps on the curve (plotting and sampling only)."""

from __future__ import annotations

import heapq
import math

from .curvedef import HMap, WeierstrassCurve
from .exactpoly import UPoly


def _fl(u: UPoly) -> list[float]:
    return [float(c) for c in u.c]


def _horner(c: list[float], t: float) -> float:
    acc = 0.0
    for x in reversed(c):
        acc = acc * t + x
    return acc


class FloatMap:
    """Evaluate (t, branch) -> image point in floating point."""

    def __init__(self, hmap: HMap, curve: WeierstrassCurve):
        self.p = _fl(curve.p)
        self.comps = [tuple(_fl(u) for u in (c.a1, c.a2, c.b1, c.b2)) for c in hmap.components]

    def s(self, t: float, sigma: int) -> float | None:
        v = _horner(self.p, t)
        if v < 0:
            if v > -1e-12 * (1 + abs(t)) ** len(self.p):
                return 0.0
            return None
        return sigma * math.sqrt(v)

    def __call__(self, t: float, sigma: int) -> list[float] | None:
        s = self.s(t, sigma)
        if s is None:
            return None
        out = []
        for a1, a2, b1, b2 in self.comps:
            den = _horner(b1, t) + s * _horner(b2, t)
            if den == 0:
                return None
            out.append((_horner(a1, t) + s * _horner(a2, t)) / den)
        return out


def _chord_deviation(p, a, b) -> float:
    d = [y - x for x, y in zip(a, b)]
    L = sum(x * x for x in d)
    if L == 0:
        return math.dist(p, a)
    u = min(1.0, max(0.0, sum((pi - ai) * di for pi, ai, di in zip(p, a, d)) / L))
    return math.dist(p, [ai + u * di for ai, di in zip(a, d)])


def sample_arc(fm: FloatMap, sigma: int, ta: float, tb: float, resolution: float = 1e-3,
               clip: float = math.inf, max_points: int = 4000,
               focus: float = math.inf, min_depth: int = 5) -> list[list[float]]:
    """Image points along the arc of branch ``sigma`` for t in [ta, tb].

    Intervals are bisected in order of how far the image of their midpoint
    lies from the chord, until every chord is within ``resolution`` of the
    arc (below depth ``min_depth`` splitting is unconditional) or the point
    budget is spent.  Deviations are ranked after pulling points radially
    into the ball of radius ``focus``, so far-out stretches near a pole do
    not starve the part of the arc that is actually drawn.  Points beyond
    ``clip`` are dropped.
    """
    def ok(pt):
        return pt is not None and all(math.isfinite(x) and abs(x) <= clip for x in pt)

    def pulled(pt):
        n = math.hypot(*pt)
        return pt if n <= focus else [x * focus / n for x in pt]

    result = {ta: fm(ta, sigma), tb: fm(tb, sigma)}
    heap: list[tuple[float, int, float, float]] = []
    budget = max_points

    def push(depth: int, a: float, b: float) -> None:
        nonlocal budget
        if depth > 40 or b - a <= 1e-14 * (1 + abs(a)) or budget <= 0:
            return
        pa, pb = result[a], result[b]
        m = 0.5 * (a + b)
        if ok(pa) and ok(pb):
            pm = result[m] = fm(m, sigma)
            budget -= 1
            if not ok(pm):
                prio = -math.inf
            else:
                dev = _chord_deviation(pm, pa, pb)
                if dev <= resolution and depth >= min_depth:
                    return
                prio = -_chord_deviation(pulled(pm), pulled(pa), pulled(pb))
                if depth < min_depth:
                    prio = -math.inf
        elif ok(pa) or ok(pb):
            prio = -math.inf          # the visible part ends inside: locate it first
        elif depth > 6:
            return
        else:
            prio = float(depth)       # invisible: a few coarse probes only
        heapq.heappush(heap, (prio, depth, a, b))

    push(0, ta, tb)
    while heap and budget > 0:
        _, depth, a, b = heapq.heappop(heap)
        m = 0.5 * (a + b)
        if m not in result:
            result[m] = fm(m, sigma)
            budget -= 1
        push(depth + 1, a, m)
        push(depth + 1, m, b)
    return [result[t] for t in sorted(result) if ok(result[t])]
