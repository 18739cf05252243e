"""Topology of space curves through a projection to the xy-plane.

Events are computed for the planar projection; the connectivity comes from
the graph on G, so lifting is a matter of evaluating all three coordinates
at the same places.  When the projection is not birational or has vertical
asymptotes, a seeded unimodular change of ambient coordinates is tried.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .curvedef import (CElem, HMap, MapComponent, NotBirational, WeierstrassCurve,
                       birational_check, canonical_component, pole_points)
from .planar_topo import Topology, compute_topology
from .realalg import GPoint


class RandomizationExhausted(RuntimeError):
    """No admissible change of coordinates was found within the attempt budget."""


@dataclass
class HypothesisReport:
    status: str                                 # "OK", "H1Fail" or "H2Fail"
    h1: bool
    h2: bool
    h2_witnesses: list[GPoint] = field(default_factory=list)
    z_asymptote_witnesses: list[GPoint] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.status == "OK"

    def to_json(self, p) -> dict:
        def pts(ws):
            return [{"t_approx": round(a, 12), "s_approx": round(b, 12)}
                    for a, b in (w.approx(p) for w in ws)]

        return {"status": self.status, "H1": self.h1, "H2": self.h2,
                "H2_witnesses": pts(self.h2_witnesses),
                "z_vertical_asymptote": bool(self.z_asymptote_witnesses),
                "z_asymptote_witnesses": pts(self.z_asymptote_witnesses)}


@dataclass
class SpaceSetup:
    map: HMap                                   # map in the working coordinates
    projected_map: HMap
    applied_change: list[list[int]] | None = None
    attempts: int = 0
    report: HypothesisReport | None = None


def _asymptote_witnesses(pole_comp: MapComponent, finite_comps: list[MapComponent],
                         curve: WeierstrassCurve) -> list[GPoint]:
    """Poles of ``pole_comp`` where the denominators of ``finite_comps`` do not vanish."""
    p = curve.p
    out = []
    for q in pole_points(pole_comp, curve):
        if any(c.den.vanishes_at(q, p) for c in finite_comps):
            continue
        out.append(q)
    return out


def check_hypotheses(hmap: HMap, curve: WeierstrassCurve, seed: int = 0) -> HypothesisReport:
    """H1: the xy-projection is birational.  H2: no pole of y where x is finite
    and the numerator of y is nonzero.  Poles of z with x, y finite are
    reported separately and do not fail the check."""
    if hmap.dim != 3:
        raise ValueError("check_hypotheses needs a map with three components")
    cx, cy, cz = hmap.components
    h1 = birational_check(HMap([cx, cy]), curve, seed=seed)
    w2 = _asymptote_witnesses(cy, [cx], curve)
    wz = _asymptote_witnesses(cz, [cx, cy], curve)
    status = "OK" if h1 and not w2 else ("H1Fail" if not h1 else "H2Fail")
    return HypothesisReport(status, h1, not w2, w2, wz)


def _unimodular(rng: random.Random, bound: int = 8) -> list[list[int]]:
    """Random 3x3 integer matrix with determinant 1 and entries in [-bound, bound]."""
    while True:
        L = [[1, 0, 0], [rng.randint(-2, 2), 1, 0], [rng.randint(-2, 2), rng.randint(-2, 2), 1]]
        U = [[1, rng.randint(-2, 2), rng.randint(-2, 2)], [0, 1, rng.randint(-2, 2)], [0, 0, 1]]
        M = [[sum(L[i][k] * U[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
        if all(abs(x) <= bound for row in M for x in row) and M != [[1, 0, 0], [0, 1, 0], [0, 0, 1]]:
            return M


def apply_linear_change(hmap: HMap, M: list[list[int]], curve: WeierstrassCurve) -> HMap:
    """Components of M * (x, y, z) over a common denominator, reduced on the curve."""
    p = curve.p
    nums = [c.num for c in hmap.components]
    dens = [c.den for c in hmap.components]
    out = []
    for row in M:
        num = CElem.of(0)
        den = CElem.of(1)
        used = [j for j in range(3) if row[j]]
        for j in used:
            term = nums[j].scale(row[j])
            for k in used:
                if k != j:
                    term = term.mul(dens[k], p)
            num = num + term
        for k in used:
            den = den.mul(dens[k], p)
        if not used:
            raise ValueError("singular change of coordinates")
        out.append(canonical_component(num.u, num.v, den.u, den.v))
    return HMap(out, hmap.substitution)


def randomize_coordinates(hmap: HMap, curve: WeierstrassCurve, seed: int = 0,
                          attempts: int = 5) -> SpaceSetup:
    """Find coordinates satisfying H1 and H2, starting with the identity."""
    rep = check_hypotheses(hmap, curve, seed)
    if rep.ok:
        return SpaceSetup(hmap, hmap.project(2), None, 0, rep)
    rng = random.Random(seed)
    for k in range(1, attempts + 1):
        M = _unimodular(rng)
        changed = apply_linear_change(hmap, M, curve)
        rep = check_hypotheses(changed, curve, seed)
        if rep.ok:
            return SpaceSetup(changed, changed.project(2), M, k, rep)
    raise RandomizationExhausted(f"no admissible coordinates after {attempts} changes")


def _some_pair_birational(hmap: HMap, curve: WeierstrassCurve, seed: int) -> bool:
    c = hmap.components
    return any(birational_check(HMap([c[i], c[j]]), curve, seed=seed)
               for i, j in ((0, 1), (0, 2), (1, 2)))


def topology3d(hmap: HMap, curve: WeierstrassCurve, *, seed: int = 0, certify: bool = True,
               digits: int = 6, polylines: bool = True) -> Topology:
    """Topology graph of a space curve given by a three-component map.

    Events come from the (possibly changed) xy-projection; every place is
    evaluated with the original map, which is the same as mapping the
    changed coordinates back through the inverse change.
    """
    if hmap.dim != 3:
        raise ValueError("topology3d needs a map with three components")
    try:
        setup = randomize_coordinates(hmap, curve, seed)
    except RandomizationExhausted:
        if not _some_pair_birational(hmap, curve, seed):
            raise NotBirational("the map is not birational onto its image") from None
        raise
    topo = compute_topology(hmap, curve, certify=certify, seed=seed, repair=False, digits=digits,
                            check_birational=False, event_map=setup.projected_map,
                            polylines=polylines)
    md = topo.graph.metadata
    md["birational_check"] = "Birational"
    md["hypotheses"] = setup.report.to_json(curve.p)
    md["coordinate_change"] = setup.applied_change
    md["coordinate_change_attempts"] = setup.attempts
    return topo
