"""Exact arithmetic in the residue field of a real point of the curve.

For a point (t0, s0) with t0 a root of the irreducible integer polynomial m,
K = Q[t]/(m) and every value of a rational function on the curve at the point
lies in K(s0) with s0^2 = P(t0).  Elements are pairs (a, b) meaning
a(t0) + s0 b(t0).  The same machinery serves the places at infinity, where
t0 is a dummy rational and s0 = sigma sqrt(c).

Zero tests are exact: a + s0 b vanishes iff it does so in K when b = 0, and
otherwise iff its norm a^2 - P b^2 is zero in K *and* the conjugate is the
nonzero one, which an interval enclosure decides without ambiguity.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import flint

from .exactpoly import MPoly, UPoly, invmod, resultant
from .realalg import AlgNum, Branch, GPoint, RI, isolate_real_roots, poly_range


class PointField:
    """K(s0) for a real point; ``sigma`` is the sign of s0 (0 when s0 = 0)."""

    def __init__(self, t: AlgNum, sigma: int, P: UPoly):
        self.t = t
        self.sigma = sigma
        self.m = t.defpoly
        self.P = P
        self.Pm = P % self.m
        self.sbits = 64
        if sigma == 0 and not self.Pm.is_zero():
            raise ValueError("s0 = 0 requires P(t0) = 0")

    @classmethod
    def at(cls, q: GPoint, p: UPoly) -> "PointField":
        return cls(q.t, q.branch.sign, p)

    # -- element construction ----------------------------------------------------
    def elem(self, a, b=None) -> "FElem":
        a = a if isinstance(a, UPoly) else UPoly([a])
        b = UPoly() if b is None else (b if isinstance(b, UPoly) else UPoly([b]))
        a = a % self.m
        b = UPoly() if self.sigma == 0 else b % self.m
        return FElem(self, a, b)

    def one(self) -> "FElem":
        return self.elem(1)

    def k_deriv_m(self) -> UPoly:
        return self.m.derivative() % self.m

    # -- enclosures -----------------------------------------------------------
    def t_interval(self) -> RI:
        return self.t.interval()

    def s_interval(self) -> RI:
        if self.sigma == 0:
            return RI.point(0)
        ti = self.t_interval()
        L, H = poly_range(self.P, ti.lo, ti.hi)
        w = ti.width
        bits = self.sbits
        if w:
            bits = max(bits, 2 * int(-math.log2(max(w, Fraction(1, 1 << 4000)))) + 16)
        r = RI(max(L, Fraction(0)), max(H, Fraction(0))).sqrt(bits)
        return r if self.sigma > 0 else -r

    def refine(self) -> None:
        self.sbits += 24
        if not self.t.is_rational:
            self.t.bisect_once()


@dataclass
class FElem:
    F: PointField
    a: UPoly
    b: UPoly

    def __add__(self, o: "FElem") -> "FElem":
        return FElem(self.F, self.a + o.a, self.b + o.b)

    def __sub__(self, o: "FElem") -> "FElem":
        return FElem(self.F, self.a - o.a, self.b - o.b)

    def __neg__(self) -> "FElem":
        return FElem(self.F, -self.a, -self.b)

    def __mul__(self, o) -> "FElem":
        F = self.F
        if not isinstance(o, FElem):
            return FElem(F, self.a * o, self.b * o)
        m = F.m
        a = (self.a * o.a + F.Pm * ((self.b * o.b) % m)) % m
        b = (self.a * o.b + self.b * o.a) % m if F.sigma else UPoly()
        return FElem(F, a, b)

    def conj(self) -> "FElem":
        return FElem(self.F, self.a, -self.b)

    def norm(self) -> UPoly:
        F = self.F
        return (self.a * self.a - F.Pm * self.b * self.b) % F.m

    def is_trivially_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def enclosure(self) -> RI:
        F = self.F
        ti = F.t_interval()
        A = RI(*poly_range(self.a, ti.lo, ti.hi))
        if self.b.is_zero() or F.sigma == 0:
            return A
        B = RI(*poly_range(self.b, ti.lo, ti.hi))
        return A + B * F.s_interval()

    def is_zero(self) -> bool:
        if self.is_trivially_zero():
            return True
        if self.b.is_zero() or self.F.sigma == 0:
            return False
        if not self.norm().is_zero():
            return False
        # exactly one of self, conj(self) vanishes
        other = self.conj()
        while True:
            e1 = self.enclosure()
            if not e1.contains_zero():
                return False
            e2 = other.enclosure()
            if not e2.contains_zero():
                return True
            self.F.refine()

    def sign(self) -> int:
        if self.is_zero():
            return 0
        while True:
            s = self.enclosure().sign()
            if s is not None and s != 0:
                return s
            self.F.refine()

    def inv(self) -> "FElem":
        F = self.F
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in residue field")
        if self.b.is_zero() or F.sigma == 0:
            return FElem(F, invmod(self.a, F.m), UPoly())
        n = self.norm()
        if not n.is_zero():
            ni = invmod(n, F.m)
            return FElem(F, (self.a * ni) % F.m, (-self.b * ni) % F.m)
        # the conjugate vanishes: s0 = a/b in K, so self = 2a
        return FElem(F, invmod(2 * self.a, F.m), UPoly())

    def __truediv__(self, o: "FElem") -> "FElem":
        return self * o.inv()

    def pow(self, k: int) -> "FElem":
        r = self.F.one()
        for _ in range(k):
            r = r * self
        return r

    def charpoly(self) -> UPoly:
        """Characteristic polynomial of multiplication by this element.

        The basis is t^i (and s t^i when s0 != 0) of Q[t, s]/(m, s^2 - P);
        by Cayley-Hamilton the polynomial vanishes at the element's value.
        """
        F = self.F
        k = F.m.deg
        two = F.sigma != 0
        n = 2 * k if two else k
        cols: list[list[Fraction]] = []
        tk = UPoly([1])
        t = UPoly([0, 1])
        images: list[list[FElem]] = [[] for _ in range(2 if two else 1)]
        for i in range(k):
            images[0].append(FElem(F, (self.a * tk) % F.m, (self.b * tk) % F.m if two else UPoly()))
            if two:
                images[1].append(FElem(F, (F.Pm * self.b * tk) % F.m, (self.a * tk) % F.m))
            tk = (tk * t) % F.m
        for group in images:
            for img in group:
                col = [Fraction(0)] * n
                for r, c in enumerate(img.a.c):
                    col[r] = Fraction(c)
                if two:
                    for r, c in enumerate(img.b.c):
                        col[k + r] = Fraction(c)
                cols.append(col)
        # det(v I - Z / D) = D^-n det(D v I - Z) with Z integral
        D = 1
        for col in cols:
            for x in col:
                D = D * x.denominator // math.gcd(D, x.denominator)
        Z = flint.fmpz_mat(n, n)
        for j, col in enumerate(cols):
            for r, x in enumerate(col):
                if x:
                    Z[r, j] = int(x * D)
        cz = [int(c) for c in Z.charpoly().coeffs()]
        return UPoly([c * D ** i for i, c in enumerate(cz)])

    def defining_polynomial(self) -> UPoly:
        """A nonzero polynomial in v vanishing at this element."""
        if self.F.m.deg == 1 or self.F.m.deg > 8:
            return self.defining_polynomial_resultant()
        return self.charpoly()

    def defining_polynomial_resultant(self) -> UPoly:
        """Res_t(m, (D v - A)^2 - P B^2): the elimination route, used as a cross-check."""
        F = self.F
        da, ai = self.a.integer_form()
        db, bi = self.b.integer_form()
        D = da * db // math.gcd(da, db)
        A = self.a * D
        B = self.b * D
        if F.m.deg == 1:
            t0 = Fraction(-F.m.c[0], F.m.c[1])
            av, bv = Fraction(A(t0)), Fraction(B(t0))
            if bv == 0 or F.sigma == 0:
                return UPoly([-av, D])
            Pv = Fraction(F.P(t0))
            # (D v - av)^2 - Pv bv^2
            return UPoly([av * av - Pv * bv * bv, -2 * D * av, D * D])
        vars_ = ("v", "t")
        v = MPoly.var(vars_, "v")
        Am = MPoly.from_upoly(A, vars_, "t")
        mm = MPoly.from_upoly(F.m, vars_, "t")
        if self.b.is_zero() or F.sigma == 0:
            Q = v * D - Am
        else:
            Bm = MPoly.from_upoly(B, vars_, "t")
            Pm = MPoly.from_upoly(F.Pm, vars_, "t")
            lin = v * D - Am
            Q = lin * lin - Pm * Bm * Bm
        R = resultant(mm, Q, "t")
        return R.to_upoly("v")

    def to_algnum(self) -> AlgNum:
        if self.is_trivially_zero():
            return AlgNum.rational(0)
        R = self.defining_polynomial()
        return identify_root(R, self.enclosure, self.F.refine)


@functools.lru_cache(maxsize=512)
def _isolated(R: UPoly) -> tuple[AlgNum, ...]:
    return tuple(isolate_real_roots(R))


def identify_root(R: UPoly, enclose, refine) -> AlgNum:
    """The unique real root of R lying in the shrinking enclosure."""
    roots = [r.copy() for r in _isolated(R)]
    if not roots:
        raise ArithmeticError("value has no real candidate root")
    for _ in range(4000):
        e = enclose()
        hits = [r for r in roots if r.interval().overlaps(e)]
        if len(hits) == 1:
            return hits[0].copy()
        if not hits:
            # enclosure is tighter than root intervals: refine the roots
            for r in roots:
                r.bisect_once()
            continue
        for r in hits:
            r.bisect_once()
        refine()
    raise ArithmeticError("failed to identify algebraic value")


# --------------------------------------------------------------------------
# local leading terms
# --------------------------------------------------------------------------

def local_leading(u: UPoly, v: UPoly, q: GPoint, p: UPoly, F: PointField) -> tuple[int, FElem]:
    """Order and leading coefficient of u + s v at q along the curve.

    The local parameter is t - t0 at points with s0 != 0 and s at points with
    s0 = 0.
    """
    if u.is_zero() and v.is_zero():
        raise ZeroDivisionError("identically zero function")
    m = F.m
    mp = F.k_deriv_m()
    if q.branch is Branch.ZERO:
        ptil = p.exact_div(m) % m
        ptil_inv = invmod(ptil, m)
        cands = []
        if not u.is_zero():
            k, uk = u.multiplicity(m)
            cands.append((2 * k, F.elem(uk) * F.elem(ptil_inv).pow(k)))
        if not v.is_zero():
            j, vj = v.multiplicity(m)
            cands.append((2 * j + 1, F.elem(vj) * F.elem(ptil_inv).pow(j)))
        return min(cands, key=lambda oc: oc[0])
    order = 0
    scale = F.one()
    while True:
        z = F.elem(u, v)
        if not z.is_zero():
            return order, z * scale
        um = u % m
        vm = v % m
        if um.is_zero() and vm.is_zero():
            u = u.exact_div(m) if not u.is_zero() else u
            v = v.exact_div(m) if not v.is_zero() else v
            order += 1
            scale = scale * F.elem(mp)
            continue
        W = u * u - p * v * v
        k, Wk = W.multiplicity(m)
        coeff = F.elem(Wk) * F.elem(mp).pow(k) / F.elem(u, -v)
        return order + k, coeff * scale


@dataclass
class Limit:
    """Behaviour of one component at a point of G.

    ``finite`` holds the value (an FElem) when the limit exists; otherwise
    ``signs`` maps each approach side to the sign of the diverging value.
    Sides are 'left'/'right' in t for points with s0 != 0 and 'Plus'/'Minus'
    (the arc by sign of s) for points with s0 = 0.
    """

    order: int
    coeff: FElem
    zero_branch: bool

    @property
    def is_finite(self) -> bool:
        return self.order >= 0

    def value(self) -> FElem:
        if self.order > 0:
            return self.coeff.F.elem(0)
        return self.coeff

    def side_signs(self) -> dict[str, int]:
        sg = self.coeff.sign()
        odd = self.order % 2 != 0
        if self.zero_branch:
            return {"Plus": sg, "Minus": -sg if odd else sg}
        return {"right": sg, "left": -sg if odd else sg}


def component_limit(comp, q: GPoint, p: UPoly, F: PointField | None = None) -> Limit:
    F = F or PointField.at(q, p)
    if comp.a1.is_zero() and comp.a2.is_zero():
        return Limit(1, F.one(), q.branch is Branch.ZERO)
    on, cn = local_leading(comp.a1, comp.a2, q, p, F)
    od, cd = local_leading(comp.b1, comp.b2, q, p, F)
    return Limit(on - od, cn / cd, q.branch is Branch.ZERO)
