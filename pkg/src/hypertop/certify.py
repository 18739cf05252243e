"""Exact coordinates of image points and certified coincidence grouping.

A finite image coordinate is a quotient of two elements of the residue field
of the point it comes from.  Equality of two coordinates is decided on their
exact algebraic representations: each value is identified as a root of an
integer polynomial obtained by eliminating t against the point's defining
polynomial, and two such roots are compared with gcds of defining
polynomials plus isolating intervals.  Interval boxes are used only to
separate values, never to declare them equal.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .algfield import FElem, identify_root
from .exactpoly import MPoly, UPoly, resultant
from .realalg import AlgNum, RI, compare

log = logging.getLogger(__name__)


_CHARPOLY_MAX_DEG = 8


class InfiniteCoordinate(ValueError):
    pass


class Coord:
    """A finite coordinate num / den with num, den in one residue field."""

    def __init__(self, num: FElem, den: FElem | None = None):
        self.num = num
        self.den = den
        self._alg: AlgNum | None = None

    @property
    def F(self):
        return self.num.F

    def enclosure(self) -> RI:
        while True:
            n = self.num.enclosure()
            if self.den is None:
                return n
            d = self.den.enclosure()
            if not d.contains_zero():
                return n / d
            self.F.refine()

    def refine_to(self, width) -> RI:
        width = Fraction(width)
        for _ in range(100000):
            e = self.enclosure()
            if e.width <= width:
                return e
            self.F.refine()
        raise ArithmeticError("enclosure refinement stalled")

    def approx(self) -> float:
        e = self.enclosure()
        scale = max(abs(e.lo), abs(e.hi), Fraction(1))
        return float(self.refine_to(scale * Fraction(1, 1 << 52)).mid)

    def _ratio_polynomial(self) -> UPoly:
        """Polynomial vanishing at num/den: characteristic polynomial of the quotient."""
        # reducing the quotient mod m inflates coefficients; for large fields
        # the resultant on the unreduced numerator and denominator is cheaper
        if self.F.m.deg == 1 or self.F.m.deg > _CHARPOLY_MAX_DEG:
            return self._ratio_polynomial_resultant()
        return (self.num / self.den).charpoly()

    def _ratio_polynomial_resultant(self) -> UPoly:
        """Res_t(m, (v d.a - n.a)^2 - P (v d.b - n.b)^2), the elimination route."""
        F = self.F
        n, d = self.num, self.den
        if F.m.deg == 1:
            t0 = Fraction(-F.m.c[0], F.m.c[1])
            na, nb = Fraction(n.a(t0)), Fraction(n.b(t0))
            da, db = Fraction(d.a(t0)), Fraction(d.b(t0))
            if F.sigma == 0 or (nb == 0 and db == 0):
                return UPoly([-na, da])
            Pv = Fraction(F.P(t0))
            lin = UPoly([-na, da])
            sl = UPoly([-nb, db])
            return lin * lin - sl * sl * Pv
        two = not (F.sigma == 0 or (n.b.is_zero() and d.b.is_zero()))
        return _elimination_poly(F.m, F.Pm, n.a, n.b if two else None, d.a, d.b if two else None)

    def algnum(self) -> AlgNum:
        if self._alg is None:
            if self.den is None:
                self._alg = self.num.to_algnum()
            else:
                R = self._ratio_polynomial()
                if R.is_zero() or R.deg < 1:
                    self._alg = (self.num / self.den).to_algnum()
                else:
                    self._alg = identify_root(R, self.enclosure, self.F.refine)
        return self._alg

    def decimal(self, digits: int) -> str:
        a = self.algnum()
        return a.decimal(digits)


@functools.lru_cache(maxsize=512)
def _elimination_poly(m: UPoly, Pm: UPoly, na: UPoly, nb: UPoly | None, da: UPoly,
                      db: UPoly | None) -> UPoly:
    """Res_t(m, (v da - na)^2 - Pm (v db - nb)^2), or Res_t(m, v da - na)."""
    vars_ = ("v", "t")
    v = MPoly.var(vars_, "v")

    def mp(u: UPoly) -> MPoly:
        return MPoly.from_upoly(u, vars_, "t")

    Q = v * mp(da) - mp(na)
    if nb is not None:
        sl = v * mp(db) - mp(nb)
        Q = Q * Q - mp(Pm) * sl * sl
    return resultant(mp(m), Q, "t").to_upoly("v")


def boxes_disjoint(A: list[Coord], B: list[Coord]) -> bool:
    return any(not a.enclosure().overlaps(b.enclosure()) for a, b in zip(A, B))


def images_equal(A: list, B: list) -> bool:
    """Exact decision of A == B for two finite image points."""
    if any(not isinstance(c, Coord) for c in list(A) + list(B)):
        raise InfiniteCoordinate("images_equal needs finite coordinates")
    if len(A) != len(B):
        raise ValueError("dimension mismatch")
    if boxes_disjoint(A, B):
        return False
    for a, b in zip(A, B):
        if compare(a.algnum(), b.algnum()) != 0:
            return False
    return True


@dataclass
class Verdict:
    i: int
    j: int
    equal: bool


@dataclass
class Grouping:
    classes: list[list[int]]
    verdicts: list[Verdict] = field(default_factory=list)
    certified: bool = True


def _float_box(c: Coord) -> tuple[float, float]:
    e = c.enclosure()
    return float(e.lo), float(e.hi)


def group_coincident(points: list[list[Coord]], certify: bool = True,
                     cluster_tol: float = 1e-4, uncertified_tol: float = 1e-8) -> Grouping:
    """Partition finite image points into classes of equal points.

    Points are first clustered by boxes closer than ``cluster_tol``; inside a
    cluster every candidate pair is decided exactly.  With ``certify`` off the
    clusters are formed at ``uncertified_tol`` and accepted as they are.
    """
    n = len(points)
    tol = cluster_tol if certify else uncertified_tol
    boxes = []
    for pt in points:
        bx = []
        for c in pt:
            e = c.enclosure()
            scale = max(abs(e.lo), abs(e.hi), Fraction(1))
            if e.width > scale * Fraction(1, 10 ** 9):
                e = c.refine_to(scale * Fraction(1, 10 ** 9))
            bx.append((float(e.lo), float(e.hi)))
        boxes.append(bx)
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    order = sorted(range(n), key=lambda k: boxes[k][0][0] if boxes[k] else 0.0)
    for ii, a in enumerate(order):
        for b in order[ii + 1:]:
            if boxes[b][0][0] - boxes[a][0][1] > tol * max(1.0, abs(boxes[a][0][1])):
                break
            close = all(
                max(bb[0] - ba[1], ba[0] - bb[1]) <= tol * max(1.0, abs(ba[0]), abs(bb[0]))
                for ba, bb in zip(boxes[a], boxes[b]))
            if close:
                parent[find(a)] = find(b)
    clusters: dict[int, list[int]] = {}
    for k in range(n):
        clusters.setdefault(find(k), []).append(k)
    if not certify:
        return Grouping(sorted(clusters.values()), [], certified=False)
    classes: list[list[int]] = []
    verdicts: list[Verdict] = []
    for members in clusters.values():
        local: list[list[int]] = []
        for k in members:
            for cls in local:
                eq = images_equal(points[cls[0]], points[k])
                verdicts.append(Verdict(cls[0], k, eq))
                if eq:
                    cls.append(k)
                    break
            else:
                local.append([k])
        classes.extend(local)
    classes.sort()
    return Grouping(classes, verdicts, certified=True)
