"""Hyperelliptic curves s^2 = p(t) and rational maps defined on them."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .exactpoly import MPoly, UPoly, parse_rational, upoly_gcd
from .realalg import (AlgNum, Branch, GPoint, RI, poly_range, reduce_mod_curve, sign_at,
                      solve_on_curve)


class CurveError(ValueError):
    """Invalid curve or map input."""


class NotSquareFree(CurveError):
    pass


class ConstantPolynomial(CurveError):
    pass


class NotReal(CurveError):
    pass


class DenominatorVanishesOnCurve(CurveError):
    pass


class NotBirational(CurveError):
    pass


class BothComponentsDegenerate(NotBirational):
    pass


# --------------------------------------------------------------------------
# the curve
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Substitution:
    """Record of s_old = (num_a + num_b * s_new) / den, produced by normalisation."""

    num_a: UPoly
    num_b: UPoly
    den: UPoly
    warnings: tuple = ()

    def describe(self) -> str:
        return (f"s_old = ({self.num_a.to_str()} + ({self.num_b.to_str()}) * s) / "
                f"({self.den.to_str()})")


@dataclass(frozen=True)
class WeierstrassCurve:
    p: UPoly

    @property
    def degree(self) -> int:
        return self.p.deg

    @property
    def genus(self) -> int:
        return math.ceil(self.p.deg / 2) - 1

    def real_roots(self) -> list[AlgNum]:
        from .realalg import isolate_real_roots

        return isolate_real_roots(self.p)


def new_curve(p: UPoly | Sequence) -> WeierstrassCurve:
    if not isinstance(p, UPoly):
        p = UPoly([parse_rational(c) for c in p])
    if p.deg < 1:
        raise ConstantPolynomial("p(t) must be non-constant")
    if upoly_gcd(p, p.derivative()).deg > 0:
        raise NotSquareFree("p(t) is not square-free")
    curve = WeierstrassCurve(p)
    if p.deg % 2 == 0 and p.lc < 0 and not curve.real_roots():
        raise NotReal("s^2 = p(t) has no real points")
    return curve


def genus(curve: WeierstrassCurve) -> int:
    return curve.genus


# --------------------------------------------------------------------------
# elements of Q[t][s]/(s^2 - p)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class CElem:
    """The element u(t) + s v(t) of the coordinate ring of the curve."""

    u: UPoly
    v: UPoly

    @classmethod
    def of(cls, u=0, v=0) -> "CElem":
        u = u if isinstance(u, UPoly) else UPoly([u])
        v = v if isinstance(v, UPoly) else UPoly([v])
        return cls(u, v)

    def is_zero(self) -> bool:
        return self.u.is_zero() and self.v.is_zero()

    def __add__(self, o: "CElem") -> "CElem":
        return CElem(self.u + o.u, self.v + o.v)

    def __sub__(self, o: "CElem") -> "CElem":
        return CElem(self.u - o.u, self.v - o.v)

    def __neg__(self) -> "CElem":
        return CElem(-self.u, -self.v)

    def scale(self, c) -> "CElem":
        if isinstance(c, UPoly):
            return CElem(self.u * c, self.v * c)
        return CElem(self.u * c, self.v * c)

    def mul(self, o: "CElem", p: UPoly) -> "CElem":
        if self.v.is_zero() and o.v.is_zero():
            return CElem(self.u * o.u, UPoly())
        return CElem(self.u * o.u + p * self.v * o.v, self.u * o.v + self.v * o.u)

    def conj(self) -> "CElem":
        return CElem(self.u, -self.v)

    def norm(self, p: UPoly) -> UPoly:
        return self.u * self.u - p * self.v * self.v

    def dt(self) -> "CElem":
        """Partial derivative in t with s held fixed."""
        return CElem(self.u.derivative(), self.v.derivative())

    def ds(self) -> "CElem":
        return CElem(self.v, UPoly())

    def content(self) -> UPoly:
        return upoly_gcd(self.u, self.v)

    def div_poly(self, m: UPoly) -> "CElem":
        return CElem(self.u.exact_div(m) if self.u else UPoly(),
                     self.v.exact_div(m) if self.v else UPoly())

    def degree(self) -> int:
        return max(self.u.deg, self.v.deg)

    # -- exact evaluation at points of G -----------------------------------------
    def sign_at(self, q: GPoint, p: UPoly) -> int:
        """Exact sign of u(t0) + s0 v(t0) at a real point of the curve."""
        su = sign_at(self.u, q.t)
        if q.branch is Branch.ZERO:
            return su
        sv = sign_at(self.v, q.t) * q.branch.sign
        if sv == 0 or su == sv:
            return su if su else sv
        if su == 0:
            return sv
        n = sign_at(self.norm(p), q.t)
        if n == 0:
            return 0
        return su if n > 0 else sv

    def vanishes_at(self, q: GPoint, p: UPoly) -> bool:
        return self.sign_at(q, p) == 0

    def enclosure(self, q: GPoint, p: UPoly) -> RI:
        ti = q.t.interval()
        U = RI(*poly_range(self.u, ti.lo, ti.hi))
        if q.branch is Branch.ZERO or self.v.is_zero():
            return U
        V = RI(*poly_range(self.v, ti.lo, ti.hi))
        w = ti.width
        bits = 64 if w == 0 else max(64, 2 * int(-math.log2(max(w, Fraction(1, 1 << 4000)))) + 16)
        return U + V * q.s_interval(p, bits)

    def value_at_rational(self, t0: Fraction, sign: int, p: UPoly) -> RI:
        U = Fraction(self.u(t0))
        V = Fraction(self.v(t0))
        if sign == 0 or V == 0:
            return RI.point(U)
        r = RI.point(p(t0)).sqrt(96)
        return RI.point(U) + RI.point(V) * (r if sign > 0 else -r)

    def to_mpoly(self, vars=("t", "s")) -> MPoly:
        out = MPoly.from_upoly(self.u, vars, "t")
        return out + MPoly.from_upoly(self.v, vars, "t") * MPoly.var(vars, "s")


# --------------------------------------------------------------------------
# map components
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class MapComponent:
    """The rational function (a1 + s a2) / (b1 + s b2) on the curve."""

    a1: UPoly
    a2: UPoly
    b1: UPoly
    b2: UPoly

    @property
    def num(self) -> CElem:
        return CElem(self.a1, self.a2)

    @property
    def den(self) -> CElem:
        return CElem(self.b1, self.b2)

    def is_s_free(self) -> bool:
        return (self.a1 * self.b2 - self.a2 * self.b1).is_zero()

    def to_json(self) -> dict:
        def enc(u: UPoly) -> list[str]:
            return [str(c) for c in u.c]

        return {"a1": enc(self.a1), "a2": enc(self.a2), "b1": enc(self.b1), "b2": enc(self.b2)}

    def degree(self) -> int:
        return max(self.a1.deg, self.a2.deg, self.b1.deg, self.b2.deg)

    def describe(self) -> str:
        def part(u: UPoly, v: UPoly) -> str:
            if v.is_zero():
                return f"({u.to_str()})"
            return f"({u.to_str()} + s*({v.to_str()}))"

        return f"{part(self.a1, self.a2)}/{part(self.b1, self.b2)}"


def canonical_component(a1, a2, b1, b2) -> MapComponent:
    """Normalise a component: s-free form when possible, no common content."""
    a1, a2, b1, b2 = (x if isinstance(x, UPoly) else UPoly([parse_rational(c) for c in x])
                      for x in (a1, a2, b1, b2))
    if b1.is_zero() and b2.is_zero():
        raise DenominatorVanishesOnCurve("denominator is identically zero")
    if (a1 * b2 - a2 * b1).is_zero():
        # the value does not depend on s
        if not b1.is_zero():
            a1, a2, b2 = a1, UPoly(), UPoly()
        else:
            a1, b1, a2, b2 = a2, b2, UPoly(), UPoly()
    g = UPoly()
    for x in (a1, a2, b1, b2):
        if not x.is_zero():
            g = upoly_gcd(g, x)
    if g.deg > 0:
        a1, a2, b1, b2 = (x.exact_div(g) if not x.is_zero() else x for x in (a1, a2, b1, b2))
    # scale to integer coefficients with a positive leading denominator term
    den = 1
    for x in (a1, a2, b1, b2):
        den = den * x.integer_form()[0] // math.gcd(den, x.integer_form()[0])
    parts = [x * den for x in (a1, a2, b1, b2)]
    cont = 0
    for x in parts:
        for c in x.c:
            cont = math.gcd(cont, int(c))
    lead = (parts[2] if not parts[2].is_zero() else parts[3]).lc
    if lead < 0:
        cont = -cont
    a1, a2, b1, b2 = (x * Fraction(1, cont) for x in parts)
    return MapComponent(a1, a2, b1, b2)


def reduce_to_component(num: MPoly, den: MPoly, curve: WeierstrassCurve) -> MapComponent:
    """Canonical component for num(t, s)/den(t, s) modulo s^2 - p(t)."""
    A1, A2 = reduce_mod_curve(num, curve.p)
    B1, B2 = reduce_mod_curve(den, curve.p)
    return canonical_component(A1, A2, B1, B2)


@dataclass
class HMap:
    components: list[MapComponent]
    substitution: Substitution | None = None

    @property
    def dim(self) -> int:
        return len(self.components)

    def project(self, k: int = 2) -> "HMap":
        return HMap(self.components[:k], self.substitution)


def from_quadratic(psi1, psi2, psi3, comps: list[tuple] | None = None):
    """Normalise psi1 s^2 + psi2 s + psi3 = 0 to a Weierstrass curve.

    Completing the square gives s_new = 2 psi1 s + psi2 with
    s_new^2 = psi2^2 - 4 psi1 psi3, which must be square-free.  Map components
    given as (a1, a2, b1, b2) in the old variable are rewritten.  Real roots of
    psi1, where the substitution degenerates, are reported as warnings.
    Returns ``(curve, substitution, components)``.
    """
    psi1, psi2, psi3 = (x if isinstance(x, UPoly) else UPoly([parse_rational(c) for c in x])
                        for x in (psi1, psi2, psi3))
    if psi1.is_zero():
        raise CurveError("the s^2 coefficient vanishes: not a quadratic in s")
    p = psi2 * psi2 - 4 * psi1 * psi3
    curve = new_curve(p)
    warnings = []
    if psi1.deg >= 1:
        from .realalg import isolate_real_roots

        for r in isolate_real_roots(psi1):
            warnings.append(f"psi1 vanishes at t ~ {float(r):.6g}; the substitution degenerates there")
    # s_old = (s_new - psi2) / (2 psi1)
    sub = Substitution(-psi2, UPoly([1]), 2 * psi1, tuple(warnings))
    new_comps = []
    for comp in comps or []:
        a1, a2, b1, b2 = (x if isinstance(x, UPoly) else UPoly([parse_rational(c) for c in x])
                          for x in comp)
        # (a1 + a2 s_old) * 2 psi1 = 2 psi1 a1 - a2 psi2 + a2 s_new
        A1 = sub.den * a1 + a2 * sub.num_a
        A2 = a2 * sub.num_b
        B1 = sub.den * b1 + b2 * sub.num_a
        B2 = b2 * sub.num_b
        new_comps.append(canonical_component(A1, A2, B1, B2))
    return curve, sub, new_comps


# --------------------------------------------------------------------------
# poles and base points
# --------------------------------------------------------------------------

def pole_points(comp: MapComponent, curve: WeierstrassCurve) -> list[GPoint]:
    """Real points of G where the denominator of ``comp`` vanishes and the
    numerator does not; common zeros are :func:`component_base_points`."""
    return [q for q in solve_on_curve((comp.b1, comp.b2), curve.p)
            if not comp.num.vanishes_at(q, curve.p)]


def component_base_points(comp: MapComponent, curve: WeierstrassCurve) -> list[GPoint]:
    """Real points where numerator and denominator of ``comp`` both vanish."""
    W = comp.a1 * comp.b2 - comp.a2 * comp.b1
    if W.is_zero():
        W = upoly_gcd(comp.a1, comp.b1)
        if W.deg < 1:
            return []
    from .realalg import isolate_real_roots

    out = []
    for alpha in isolate_real_roots(W):
        sp = sign_at(curve.p, alpha)
        if sp < 0:
            continue
        branches = [Branch.ZERO] if sp == 0 else [Branch.PLUS, Branch.MINUS]
        for br in branches:
            q = GPoint(alpha.copy(), br)
            if comp.den.vanishes_at(q, curve.p) and comp.num.vanishes_at(q, curve.p):
                out.append(q)
    return out


def base_points(hmap: HMap, curve: WeierstrassCurve) -> list[tuple[int, GPoint]]:
    """(component index, point) pairs where a component is of the form 0/0."""
    out = []
    for i, comp in enumerate(hmap.components):
        for q in component_base_points(comp, curve):
            out.append((i, q))
    return out


# --------------------------------------------------------------------------
# birationality
# --------------------------------------------------------------------------

def birational_check(hmap: HMap, curve: WeierstrassCurve, seed: int = 0, tries: int = 3) -> bool:
    """Decide whether the (first two components of the) map is birational.

    A random real point (t0, s0) of G with s0 in Q(sqrt(c)) is mapped to
    (x0, y0); the number of preimages of a generic image point equals the
    degree in t of gcd(xi1(x0, t), xi2(x0, y0, t)) computed exactly over
    Q(sqrt(c)).  The first ``tries`` points decide when they agree; otherwise up
    to ``3 * tries`` are drawn and the most frequent degree is the generic one.
    """
    from .eliminants import build_xi
    from .quadfield import QSqrtPoly, sample_point

    comps = hmap.components[:2]
    if all(c.is_s_free() for c in comps):
        return False
    xi = build_xi(HMap(comps), curve)
    rng = random.Random(seed)
    degrees: list[int] = []
    # special points (ramification of the map, nodes of the image) give a
    # smaller or larger fibre; the generic size is the most frequent one
    for _ in range(3 * tries):
        pt = sample_point(comps, curve, rng)
        if pt is None:
            continue
        x0, y0 = pt
        f1 = QSqrtPoly.specialise(xi.xi1, {xi.xvar: x0}, "t")
        f2 = QSqrtPoly.specialise(xi.xi2, {xi.xvar: x0, xi.yvar: y0}, "t")
        degrees.append(QSqrtPoly.gcd_degree(f1, f2))
        if len(degrees) >= tries and len(set(degrees)) == 1:
            break
    if not degrees:
        return False
    counts = {d: degrees.count(d) for d in set(degrees)}
    generic = max(sorted(counts), key=lambda d: counts[d])
    return generic == 1
