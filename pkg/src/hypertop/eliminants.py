"""Implicit relations between the parameter t and the image coordinates.

For a planar map (x, y) = (X(t, s), Y(t, s)) on s^2 = p(t):

* ``xi1(x, t)`` eliminates s between x D1 - N1 and s^2 - p;
* ``xi2(x, y, t)`` eliminates s between x D1 - N1 and y D2 - N2;
* the first subresultant of xi1, xi2 with respect to t is
  ``sres1(x, y) t + sr1(x, y)``, which inverts the map generically.

When x does not depend on s the pair is replaced by (x D1 - N1, the
s-eliminant of y D2 - N2 against the curve).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .curvedef import (BothComponentsDegenerate, CElem, HMap, MapComponent,
                       NotBirational, WeierstrassCurve)
from .exactpoly import (MPoly, UPoly, first_subresultant_coeffs, mpoly_content_in,
                        mpoly_div_upoly, upoly_gcd)

VARS = ("x", "y", "t")


def _mp(u: UPoly) -> MPoly:
    return MPoly.from_upoly(u, VARS, "t")


def resxg(comp: MapComponent, p: UPoly, var: str = "x") -> MPoly:
    """Closed form of Res_s(var D - N, s^2 - p(t)) for a component depending on s."""
    X = MPoly.var(VARS, var)
    a1, a2, b1, b2 = comp.a1, comp.a2, comp.b1, comp.b2
    c2 = b1 * b1 - p * b2 * b2
    c1 = -2 * (a1 * b1 - p * a2 * b2)
    c0 = a1 * a1 - p * a2 * a2
    return _mp(c2) * X * X + _mp(c1) * X + _mp(c0)


def resxy(cx: MapComponent, cy: MapComponent) -> MPoly:
    """Closed form of Res_s(x D1 - N1, y D2 - N2)."""
    x = MPoly.var(VARS, "x")
    y = MPoly.var(VARS, "y")
    a11, a12, b11, b12 = cx.a1, cx.a2, cx.b1, cx.b2
    a21, a22, b21, b22 = cy.a1, cy.a2, cy.b1, cy.b2
    return (_mp(a22 * b11 - a21 * b12) * x + _mp(a11 * b22 - a12 * b21) * y
            + _mp(b12 * b21 - b11 * b22) * x * y + _mp(a12 * a21 - a11 * a22))


def linear_relation(comp: MapComponent, var: str) -> MPoly:
    """var * D - N for a component that does not depend on s."""
    return _mp(comp.b1) * MPoly.var(VARS, var) - _mp(comp.a1)


def implicit_h(comp: MapComponent, var: str = "x") -> MPoly:
    """var * D(t, s) - N(t, s) as a polynomial in (var, t, s)."""
    vs = (var, "t", "s")
    X = MPoly.var(vs, var)
    s = MPoly.var(vs, "s")
    D = MPoly.from_upoly(comp.b1, vs, "t") + MPoly.from_upoly(comp.b2, vs, "t") * s
    N = MPoly.from_upoly(comp.a1, vs, "t") + MPoly.from_upoly(comp.a2, vs, "t") * s
    return X * D - N


@dataclass
class XiData:
    xi1: MPoly
    xi2: MPoly
    degenerate_x: bool
    content1: UPoly
    content2: UPoly
    xvar: str = "x"
    yvar: str = "y"
    _sres: tuple | None = field(default=None, repr=False)

    @property
    def common_content(self) -> UPoly:
        return upoly_gcd(self.content1, self.content2)

    def sres(self) -> tuple[MPoly, MPoly]:
        """(sres1, sr1): coefficients of t^1 and t^0 in the first subresultant."""
        if self._sres is None:
            self._sres = first_subresultant_coeffs(self.xi1, self.xi2, "t")
        return self._sres


def build_xi(hmap: HMap, curve: WeierstrassCurve) -> XiData:
    cx, cy = hmap.components[0], hmap.components[1]
    p = curve.p
    xs, ys = cx.is_s_free(), cy.is_s_free()
    if xs and ys:
        raise BothComponentsDegenerate("neither component depends on s")
    if xs:
        xi1 = linear_relation(cx, "x")
        xi2 = resxg(cy, p, "y")
    else:
        xi1 = resxg(cx, p, "x")
        xi2 = linear_relation(cy, "y") if ys else resxy(cx, cy)
    # only the common t-content comes from base points; a factor of one
    # eliminant alone (e.g. a t where both branches share an image) must stay
    c1 = mpoly_content_in(xi1, "t")
    c2 = mpoly_content_in(xi2, "t")
    g = upoly_gcd(c1, c2)
    if g.deg > 0:
        xi1 = mpoly_div_upoly(xi1, g, "t")
        xi2 = mpoly_div_upoly(xi2, g, "t")
    xi1, xi2 = xi1.primitive(), xi2.primitive()
    if xi1.degree("t") < 1 or xi2.degree("t") < 1:
        raise NotBirational("an eliminant does not involve t")
    return XiData(xi1, xi2, xs, c1, c2)


def substitute_on_curve(F: MPoly, cx: MapComponent, cy: MapComponent, p: UPoly) -> CElem:
    """num(F(X(t, s), Y(t, s))) reduced modulo s^2 - p, denominators cleared.

    F is a polynomial in x, y (over VARS, t-free); the result equals
    D1^dx D2^dy F(N1/D1, N2/D2) with dx, dy the degrees of F.
    """
    dx, dy = F.degree("x"), F.degree("y")
    if dx < 0:
        return CElem.of(0)
    dx, dy = max(dx, 0), max(dy, 0)
    N1, D1, N2, D2 = cx.num, cx.den, cy.num, cy.den

    def powers(e: CElem, n: int) -> list[CElem]:
        out = [CElem.of(1)]
        for _ in range(n):
            out.append(out[-1].mul(e, p))
        return out

    pN1, pD1 = powers(N1, dx), powers(D1, dx)
    pN2, pD2 = powers(N2, dy), powers(D2, dy)
    ybasis = [pN2[j].mul(pD2[dy - j], p) for j in range(dy + 1)]
    xbasis = [pN1[i].mul(pD1[dx - i], p) for i in range(dx + 1)]
    xi, yi = F.vars.index("x"), F.vars.index("y")
    byx: dict[int, dict[int, object]] = {}
    for e, c in F.terms.items():
        byx.setdefault(e[xi], {})[e[yi]] = c
    total = CElem.of(0)
    for i, row in byx.items():
        inner_u, inner_v = UPoly(), UPoly()
        for j, c in row.items():
            inner_u = inner_u + ybasis[j].u * c
            inner_v = inner_v + ybasis[j].v * c
        total = total + CElem(inner_u, inner_v).mul(xbasis[i], p)
    return total
