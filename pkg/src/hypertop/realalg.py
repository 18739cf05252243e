"""Real algebraic numbers and systems on the curve s^2 = p(t).

Real roots are isolated from certified complex root balls (arb), each
checked by an exact sign change, with Descartes' rule of signs and dyadic
bisection as the fallback.  An :class:`AlgNum` is an integer square-free defining
polynomial together with an interval ``(lo, hi]`` holding exactly one of its
roots (``lo == hi`` denotes an exact rational).  Zero tests never rely on
floating point: a polynomial vanishes at ``alpha`` iff its gcd with the
defining polynomial has a root in the isolating interval; otherwise the
interval is refined until a rigorous range enclosure excludes zero.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import flint

from .exactpoly import MPoly, UPoly, factor_irreducible, square_free_part, upoly_gcd


class Branch(enum.Enum):
    PLUS = "Plus"
    MINUS = "Minus"
    ZERO = "Zero"

    @property
    def sign(self) -> int:
        return {"Plus": 1, "Minus": -1, "Zero": 0}[self.value]

    @classmethod
    def from_sign(cls, s: int) -> "Branch":
        return cls.PLUS if s > 0 else cls.MINUS if s < 0 else cls.ZERO


# --------------------------------------------------------------------------
# exact evaluation helpers
# --------------------------------------------------------------------------

def _int_coeffs(f: UPoly) -> list[int]:
    return list(f.integer_form()[1])


def _sign_at_rational(c: Sequence[int], x: Fraction) -> int:
    """Sign of the integer polynomial ``c`` at the rational ``x``."""
    u, v = x.numerator, x.denominator
    n = len(c) - 1
    acc = 0
    vp = 1
    # sum c_i u^i v^(n-i) by Horner on u with v-powers
    for i in range(n, -1, -1):
        acc = acc * u + c[i] * vp
        vp *= v
    return (acc > 0) - (acc < 0)


def _range_scaled(c: Sequence[int], a: int, b: int, k: int) -> tuple[int, int]:
    """Bounds [L, H] on 2**(k n) * f(x) for x in [a/2**k, b/2**k]."""
    n = len(c) - 1
    L = H = c[n]
    scale = 1 << k
    sp = 1
    for i in range(n - 1, -1, -1):
        sp *= scale
        prods = (L * a, L * b, H * a, H * b)
        L = min(prods) + c[i] * sp
        H = max(prods) + c[i] * sp
    return L, H


def _dyadic_floor(x: Fraction, k: int) -> int:
    return math.floor(x * (1 << k))


def _dyadic_ceil(x: Fraction, k: int) -> int:
    return math.ceil(x * (1 << k))


def poly_range(f: UPoly, lo: Fraction, hi: Fraction, bits: int | None = None) -> tuple[Fraction, Fraction]:
    """Rigorous enclosure of ``f([lo, hi])``."""
    if not f.c:
        return Fraction(0), Fraction(0)
    d, c = f.integer_form()
    if lo == hi:
        v = Fraction(f(lo))
        return v, v
    if bits is None:
        w = hi - lo
        bits = max(8, -math.floor(math.log2(w)) + 8) if w < 1 else 8
    a = _dyadic_floor(Fraction(lo), bits)
    b = _dyadic_ceil(Fraction(hi), bits)
    L, H = _range_scaled(c, a, b, bits)
    den = d << (bits * (len(c) - 1))
    return Fraction(L, den), Fraction(H, den)


# --------------------------------------------------------------------------
# rational intervals
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class RI:
    """Closed rational interval."""

    lo: Fraction
    hi: Fraction

    @classmethod
    def point(cls, x) -> "RI":
        x = Fraction(x)
        return cls(x, x)

    def __add__(self, o) -> "RI":
        o = _ri(o)
        return RI(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self) -> "RI":
        return RI(-self.hi, -self.lo)

    def __sub__(self, o) -> "RI":
        return self + (-_ri(o))

    def __rsub__(self, o) -> "RI":
        return _ri(o) - self

    def __mul__(self, o) -> "RI":
        o = _ri(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RI(min(ps), max(ps))

    __rmul__ = __mul__

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def __truediv__(self, o) -> "RI":
        o = _ri(o)
        if o.contains_zero():
            raise ZeroDivisionError("interval divisor contains zero")
        inv = RI(1 / o.hi, 1 / o.lo)
        return self * inv

    def sqrt(self, bits: int = 64) -> "RI":
        if self.lo < 0:
            if self.hi < 0:
                raise ValueError("square root of negative interval")
            lo = Fraction(0)
        else:
            lo = self.lo
        sc = 1 << (2 * bits)
        a = math.isqrt(math.floor(lo * sc))
        hb = math.ceil(self.hi * sc)
        b = math.isqrt(hb)
        if b * b < hb:
            b += 1
        return RI(Fraction(a, 1 << bits), Fraction(b, 1 << bits))

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def sign(self) -> int | None:
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def overlaps(self, o: "RI") -> bool:
        return not (self.hi < o.lo or o.hi < self.lo)


def _ri(x) -> RI:
    if isinstance(x, RI):
        return x
    return RI.point(x)


# --------------------------------------------------------------------------
# Descartes isolation
# --------------------------------------------------------------------------

def _variations(c: Iterable[int]) -> int:
    last = 0
    v = 0
    for x in c:
        if x:
            s = 1 if x > 0 else -1
            if last and s != last:
                v += 1
            last = s
    return v


_X_PLUS_1 = flint.fmpz_poly([1, 1])


def _taylor1(c: list[int]) -> list[int]:
    """Coefficients of q(x + 1)."""
    n = len(c)
    if n > 6:
        r = [int(x) for x in flint.fmpz_poly(c)(_X_PLUS_1).coeffs()]
        return r + [0] * (n - len(r))
    c = list(c)
    for i in range(n):
        for k in range(n - 2, i - 1, -1):
            c[k] += c[k + 1]
    return c


def _roots_unit(q: list[int]) -> list[tuple[Fraction, Fraction] | Fraction]:
    """Isolate roots of the square-free integer polynomial q in (0, 1)."""
    out: list = []
    stack = [(q, 0, 0)]
    while stack:
        poly, c, k = stack.pop()
        if len(poly) <= 1:
            continue
        v = _variations(_taylor1(poly[::-1]))
        if v == 0:
            continue
        if v == 1:
            out.append((Fraction(c, 1 << k), Fraction(c + 1, 1 << k)))
            continue
        n = len(poly) - 1
        # halves: left(x) = 2^n q(x/2) on (0,1), right(x) = left(x + 1)
        left = [a << (n - i) for i, a in enumerate(poly)]
        right = _taylor1(left)
        if right[0] == 0:
            out.append(Fraction(2 * c + 1, 1 << (k + 1)))
            right = right[1:]
        stack.append((right, 2 * c + 1, k + 1))
        stack.append((left, 2 * c, k + 1))
    return out


def _arb_fraction(x) -> Fraction:
    m, e = x.man_exp()
    m, e = int(m), int(e)
    return Fraction(m << e) if e >= 0 else Fraction(m, 1 << -e)


def _isolate_arb(c: list[int]) -> list | None:
    """Real root isolation from arb complex roots; None if any check fails."""
    try:
        balls = flint.fmpz_poly(c).complex_roots()
    except Exception:
        return None
    ivs = []
    for z, _mult in balls:
        if z.imag != 0:
            continue
        mid, rad = _arb_fraction(z.real.mid()), _arb_fraction(z.real.rad())
        ivs.append((mid - rad, mid + rad))
    ivs.sort()
    if any(ivs[i][1] >= ivs[i + 1][0] for i in range(len(ivs) - 1)):
        return None
    out: list = []
    for lo, hi in ivs:
        slo, shi = _sign_at_rational(c, lo), _sign_at_rational(c, hi)
        if slo == 0:
            out.append(lo)
        elif shi == 0:
            out.append(hi)
        elif slo != shi:
            out.append((lo, hi))
        else:
            return None
    return out


def _isolate_sqfree(f: UPoly) -> list:
    """Isolating intervals / exact rationals for real roots of square-free f."""
    c = _int_coeffs(f)
    if 2 < len(c) <= 400:
        got = _isolate_arb(c)
        if got is not None:
            return got
    return _isolate_descartes(c)


def _isolate_descartes(c: list[int]) -> list:
    """Descartes/bisection isolation for square-free integer coefficients."""
    out: list = []
    while c and c[0] == 0:
        out.append(Fraction(0))
        c = c[1:]
    if len(c) <= 1:
        return out
    if len(c) == 2:
        return out + [Fraction(-c[0], c[1])]
    lc_bits = abs(c[-1]).bit_length()
    b = max(max(abs(x).bit_length() for x in c[:-1]) - lc_bits + 2, 1)
    B = 1 << b
    for sgn in (1, -1):
        # q(x) = f(sgn * B * x)
        q = [a * (sgn ** i) * (B ** i) for i, a in enumerate(c)]
        for item in _roots_unit(q):
            if isinstance(item, Fraction):
                out.append(sgn * B * item)
            else:
                lo, hi = item
                if sgn > 0:
                    out.append((lo * B, hi * B))
                else:
                    out.append((-hi * B, -lo * B))
    return out


# --------------------------------------------------------------------------
# algebraic numbers
# --------------------------------------------------------------------------

class AlgNum:
    """A real algebraic number: square-free integer defpoly plus interval."""

    __slots__ = ("defpoly", "lo", "hi", "_irreducible", "_ic")

    def __init__(self, defpoly: UPoly, lo, hi, irreducible: bool = False):
        self.defpoly = defpoly.primitive()
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._irreducible = irreducible or self.defpoly.deg == 1
        self._ic = None
        if self.lo > self.hi:
            raise ValueError("empty isolating interval")

    @classmethod
    def rational(cls, x) -> "AlgNum":
        x = Fraction(x)
        return cls(UPoly([-x.numerator, x.denominator]), x, x, irreducible=True)

    # -- basics --------------------------------------------------------------
    def _coeffs(self) -> list[int]:
        if self._ic is None:
            self._ic = list(self.defpoly.c)
        return self._ic

    @property
    def is_rational(self) -> bool:
        return self.lo == self.hi or self.defpoly.deg == 1

    @property
    def value(self) -> Fraction:
        """Exact value of a rational AlgNum."""
        if self.defpoly.deg == 1:
            c = self.defpoly.c
            return Fraction(-c[0], c[1])
        if self.lo == self.hi:
            return self.lo
        raise ValueError("not rational")

    def interval(self) -> RI:
        if self.is_rational:
            v = self.value
            return RI(v, v)
        return RI(self.lo, self.hi)

    def refine(self, width=Fraction(1, 10 ** 12)) -> "AlgNum":
        """Bisect in place until the interval width is at most ``width``."""
        if self.is_rational:
            v = self.value
            self.lo = self.hi = v
            return self
        width = Fraction(width)
        c = self._coeffs()
        slo = _sign_at_rational(c, self.lo)
        if slo == 0:
            # a root of a reducible defpoly at the open end: use the sign just above it
            slo = _sign_at_rational(_deriv(c), self.lo)
        while self.hi - self.lo > width:
            m = (self.lo + self.hi) / 2
            sm = _sign_at_rational(c, m)
            if sm == 0:
                # only possible for reducible defining polynomials
                self.lo = self.hi = m
                self.defpoly = UPoly([-m.numerator, m.denominator])
                self._ic = None
                return self
            if sm == slo:
                self.lo = m
            else:
                self.hi = m
        return self

    def bisect_once(self) -> None:
        w = self.hi - self.lo
        if w > 0:
            self.refine(w / 2)

    def approx(self, digits: int = 20) -> Fraction:
        self.refine(Fraction(1, 10 ** (digits + 2)))
        return (self.lo + self.hi) / 2

    def __float__(self) -> float:
        if self.is_rational:
            return float(self.value)
        self.refine(Fraction(1, 1 << 60) * max(1, abs(self.hi)))
        return float((self.lo + self.hi) / 2)

    def decimal(self, digits: int) -> str:
        """Decimal string correct to about ``digits`` places after the point."""
        if self.is_rational:
            v = self.value
        else:
            v = self.approx(digits)
        return _fraction_to_decimal(v, digits)

    def __repr__(self) -> str:
        if self.is_rational:
            return f"AlgNum({self.value})"
        return f"AlgNum(root of {self.defpoly.to_str('x')} in ({float(self.lo):.6g}, {float(self.hi):.6g}])"

    def copy(self) -> "AlgNum":
        a = AlgNum.__new__(AlgNum)
        a.defpoly, a.lo, a.hi, a._irreducible, a._ic = (
            self.defpoly, self.lo, self.hi, self._irreducible, self._ic)
        return a

    def to_json(self) -> dict:
        return {
            "defpoly": [str(x) for x in self.defpoly.c],
            "interval": [str(self.lo if not self.is_rational else self.value),
                         str(self.hi if not self.is_rational else self.value)],
        }

    # comparisons delegate to exact ``compare``
    def __lt__(self, o: "AlgNum") -> bool:
        return compare(self, _alg(o)) < 0

    def __le__(self, o: "AlgNum") -> bool:
        return compare(self, _alg(o)) <= 0

    def __gt__(self, o: "AlgNum") -> bool:
        return compare(self, _alg(o)) > 0

    def __ge__(self, o: "AlgNum") -> bool:
        return compare(self, _alg(o)) >= 0

    def equals(self, o) -> bool:
        return compare(self, _alg(o)) == 0

    def sign(self) -> int:
        return compare(self, AlgNum.rational(0))


def _alg(x) -> AlgNum:
    return x if isinstance(x, AlgNum) else AlgNum.rational(x)


def _fraction_to_decimal(v: Fraction, digits: int) -> str:
    q = round(v * 10 ** digits)
    neg = q < 0
    q = abs(q)
    ip, fp = divmod(q, 10 ** digits)
    s = str(ip) if digits == 0 else f"{ip}.{fp:0{digits}d}"
    if neg and q:
        s = "-" + s
    return s


def isolate_real_roots(f: UPoly) -> list[AlgNum]:
    """All distinct real roots of ``f`` as AlgNums with irreducible defpolys."""
    if f.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if f.deg <= 0:
        return []
    roots: list[AlgNum] = []
    for fac, _ in factor_irreducible(f):
        if fac.deg == 1:
            roots.append(AlgNum(fac, Fraction(-fac.c[0], fac.c[1]), Fraction(-fac.c[0], fac.c[1]), True))
            continue
        for item in _isolate_sqfree(fac):
            if isinstance(item, Fraction):  # cannot happen for irreducible deg >= 2
                roots.append(AlgNum.rational(item))
            else:
                roots.append(AlgNum(fac, item[0], item[1], irreducible=True))
    return sort_algnums(roots)


def isolate_real_roots_sqfree(f: UPoly) -> list[AlgNum]:
    """Root isolation without factoring (defpoly is the square-free part)."""
    g = square_free_part(f)
    out = []
    for item in _isolate_sqfree(g):
        if isinstance(item, Fraction):
            out.append(AlgNum.rational(item))
        else:
            out.append(AlgNum(g, item[0], item[1]))
    return sort_algnums(out)


def sort_algnums(xs: list[AlgNum]) -> list[AlgNum]:
    return sorted(xs, key=functools.cmp_to_key(compare))


def count_roots_in(f: UPoly, lo: Fraction, hi: Fraction) -> int:
    """Descartes bound on the number of roots of f in the open interval (lo, hi)."""
    c = _int_coeffs(f)
    n = len(c) - 1
    # g(x) = (1 + x)^n f((lo + hi x) / (1 + x)) -- roots in (0, inf)
    lo, hi = Fraction(lo), Fraction(hi)
    den = lo.denominator * hi.denominator
    a, b = lo * den, hi * den  # integers
    a, b = int(a), int(b)
    # build sum c_i (a + b x)^i (1 + x)^(n - i) with integer arithmetic
    res = [0] * (n + 1)
    powers_lin = [[1]]
    for i in range(1, n + 1):
        prev = powers_lin[-1]
        nxt = [0] * (len(prev) + 1)
        for j, v in enumerate(prev):
            nxt[j] += v * a
            nxt[j + 1] += v * b
        powers_lin.append(nxt)
    powers_one = [[1]]
    for i in range(1, n + 1):
        prev = powers_one[-1]
        nxt = [0] * (len(prev) + 1)
        for j, v in enumerate(prev):
            nxt[j] += v
            nxt[j + 1] += v
        powers_one.append(nxt)
    for i, ci in enumerate(c):
        if not ci:
            continue
        pl = powers_lin[i]
        po = powers_one[n - i]
        for j1, v1 in enumerate(pl):
            if v1:
                for j2, v2 in enumerate(po):
                    res[j1 + j2] += ci * v1 * v2 * den ** (n - i)
    return _variations(res)


def sign_at(f: UPoly, alpha: AlgNum) -> int:
    """Exact sign of ``f(alpha)``."""
    if f.is_zero():
        return 0
    if alpha.is_rational:
        v = f(alpha.value)
        return (v > 0) - (v < 0)
    c = f.integer_form()[1]
    if f.deg >= 1:
        if alpha._irreducible:
            vanishes = alpha.defpoly.divides(f.primitive())
        else:
            g = upoly_gcd(f, alpha.defpoly)
            vanishes = g.deg >= 1 and _has_root_in(g, alpha)
        if vanishes:
            return 0
    else:
        return (c[0] > 0) - (c[0] < 0)
    while True:
        L, H = poly_range(f, alpha.lo, alpha.hi)
        if L > 0:
            return 1
        if H < 0:
            return -1
        alpha.bisect_once()


def _has_root_in(g: UPoly, alpha: AlgNum) -> bool:
    gc = _int_coeffs(g)
    sl = _sign_at_rational(gc, alpha.lo)
    sh = _sign_at_rational(gc, alpha.hi)
    if sl == 0:
        # g is square-free: just above lo its sign is that of g'
        sl = _sign_at_rational(_deriv(gc), alpha.lo)
    return sh == 0 or sl != sh


def compare(a: AlgNum, b: AlgNum) -> int:
    """Exact comparison returning -1, 0 or 1."""
    if a is b:
        return 0
    if a.is_rational and b.is_rational:
        x, y = a.value, b.value
        return (x > y) - (x < y)
    if a.is_rational:
        return -compare(b, a)
    # a irrational from here on
    if b.is_rational:
        v = b.value
        if v <= a.lo:
            return 1
        if v > a.hi:
            return -1
        c = a._coeffs()
        s = _sign_at_rational(c, v)
        if s == 0:
            return 0  # the only root of the defpoly in (lo, hi]
        slo = _sign_at_rational(c, a.lo)
        if slo == 0:
            slo = _sign_at_rational(_deriv(c), a.lo)
        return 1 if s == slo else -1
    same = False
    if a.defpoly == b.defpoly:
        same = True
    elif a._irreducible and b._irreducible:
        same = False
    else:
        g = upoly_gcd(a.defpoly, b.defpoly)
        if g.deg >= 1 and _has_root_in(g, a) and _has_root_in(g, b):
            ga = AlgNum(g, a.lo, a.hi)
            gb = AlgNum(g, b.lo, b.hi)
            return _compare_same_poly(ga, gb)
    if same:
        return _compare_same_poly(a, b)
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        a.bisect_once()
        b.bisect_once()


def _deriv(c: Sequence[int]) -> list[int]:
    return [i * c[i] for i in range(1, len(c))]


def _compare_same_poly(a: AlgNum, b: AlgNum) -> int:
    """Both are roots of the same square-free polynomial.

    The overlap (lo, hi] of the two isolating intervals lies inside each of
    them, so it holds at most one root; a sign change there means both
    numbers are that root.
    """
    c = a._coeffs()
    while True:
        if a.hi <= b.lo:
            return -1
        if b.hi <= a.lo:
            return 1
        lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
        sl, sh = _sign_at_rational(c, lo), _sign_at_rational(c, hi)
        if sh == 0:
            return 0
        if sl == 0:
            if a.lo != b.lo:
                # lo is a root inside exactly one of the intervals; the other
                # number's root lies strictly above lo
                return -1 if a.lo < lo else 1
            # simple root at lo: the sign just above it is that of f'
            sl = _sign_at_rational(_deriv(c), lo)
        if sl != sh:
            return 0
        a.bisect_once()
        b.bisect_once()


# --------------------------------------------------------------------------
# points of G and systems on the curve
# --------------------------------------------------------------------------

@dataclass
class GPoint:
    """A real point (t, s) of the curve s^2 = p(t); s is fixed by the branch."""

    t: AlgNum
    branch: Branch

    def s_interval(self, p: UPoly, bits: int = 64) -> RI:
        if self.branch is Branch.ZERO:
            return RI.point(0)
        L, H = poly_range(p, self.t.interval().lo, self.t.interval().hi)
        r = RI(max(L, Fraction(0)), max(H, Fraction(0))).sqrt(bits)
        return r if self.branch is Branch.PLUS else -r

    def approx(self, p: UPoly) -> tuple[float, float]:
        t = float(self.t)
        pv = float(p(Fraction(self.t.approx(20))))
        s = math.sqrt(max(pv, 0.0)) * self.branch.sign
        return t, s

    def same_as(self, other: "GPoint") -> bool:
        return self.branch is other.branch and compare(self.t, other.t) == 0

    def __repr__(self) -> str:
        return f"GPoint({self.t!r}, {self.branch.value})"


def reduce_mod_curve(M: MPoly, p: UPoly, tvar: str = "t", svar: str = "s") -> tuple[UPoly, UPoly]:
    """Write M(t, s) mod s^2 - p(t) as A(t) + s B(t)."""
    ti = M.vars.index(tvar)
    si = M.vars.index(svar)
    for e in M.terms:
        if any(x for j, x in enumerate(e) if j not in (ti, si)):
            raise ValueError("polynomial involves variables other than t, s")
    by_s: dict[int, dict[int, object]] = {}
    for e, c in M.terms.items():
        by_s.setdefault(e[si], {})[e[ti]] = c
    Au, Bu = UPoly(), UPoly()
    maxs = max(by_s, default=0)
    pp = [UPoly([1])]
    for _ in range(maxs // 2):
        pp.append(pp[-1] * p)
    for k, d in by_s.items():
        u = UPoly([d.get(i, 0) for i in range(max(d) + 1)])
        term = u * pp[k // 2]
        if k % 2:
            Bu = Bu + term
        else:
            Au = Au + term
    return Au, Bu


def _branch_points(alpha: AlgNum, p: UPoly) -> list[GPoint]:
    sp = sign_at(p, alpha)
    if sp > 0:
        return [GPoint(alpha, Branch.PLUS), GPoint(alpha.copy(), Branch.MINUS)]
    if sp == 0:
        return [GPoint(alpha, Branch.ZERO)]
    return []


class IdenticallyZeroOnCurve(ValueError):
    pass


def solve_on_curve(M, p: UPoly) -> list[GPoint]:
    """Real points of G where M vanishes.

    ``M`` is an MPoly in (t, s) or a pair (A, B) meaning A(t) + s B(t).
    """
    if isinstance(M, MPoly):
        A, B = reduce_mod_curve(M, p)
    else:
        A, B = M
    if A.is_zero() and B.is_zero():
        raise IdenticallyZeroOnCurve("polynomial vanishes identically on the curve")
    pts: list[GPoint] = []
    G = upoly_gcd(A, B) if not (A.is_zero() or B.is_zero()) else (A if B.is_zero() else B).primitive()
    if G.deg >= 1:
        for alpha in isolate_real_roots(G):
            pts.extend(_branch_points(alpha, p))
    if not (A.is_zero() or B.is_zero()):
        A1 = A.exact_div(G) if G.deg >= 1 else A
        B1 = B.exact_div(G) if G.deg >= 1 else B
        N = A1 * A1 - p * B1 * B1
        if not N.is_zero() and N.deg >= 1:
            for alpha in isolate_real_roots(N):
                sa = sign_at(A1, alpha)
                if sa == 0:
                    cand = GPoint(alpha, Branch.ZERO)
                else:
                    sb = sign_at(B1, alpha)
                    # s = -A/B
                    cand = GPoint(alpha, Branch.from_sign(-sa * sb))
                if not any(q.same_as(cand) for q in pts):
                    pts.append(cand)
    return sort_gpoints(pts)


def sort_gpoints(pts: list[GPoint]) -> list[GPoint]:
    order = {Branch.MINUS: 0, Branch.ZERO: 1, Branch.PLUS: 2}

    def cmp(a: GPoint, b: GPoint) -> int:
        c = compare(a.t, b.t)
        if c:
            return c
        return order[a.branch] - order[b.branch]

    return sorted(pts, key=functools.cmp_to_key(cmp))


def rational_between(a: AlgNum | Fraction | None, b: AlgNum | Fraction | None) -> Fraction:
    """A simple rational strictly between a < b (None means unbounded)."""
    if a is None and b is None:
        return Fraction(0)
    if a is None:
        hb = _upper_lo(b)
        return Fraction(math.floor(hb) - 1)
    if b is None:
        ha = _lower_hi(a)
        return Fraction(math.ceil(ha) + 1)
    if isinstance(a, AlgNum) and isinstance(b, AlgNum):
        while a.hi > b.lo and not (a.is_rational and b.is_rational):
            if compare(a, b) >= 0:
                raise ValueError("not increasing")
            a.bisect_once()
            b.bisect_once()
    x = _lower_hi(a)
    y = _upper_lo(b)
    if x >= y:
        raise ValueError("not increasing")
    return _simplest_between(x, y)


def _lower_hi(a) -> Fraction:
    if isinstance(a, AlgNum):
        return a.value if a.is_rational else a.hi
    return Fraction(a)


def _upper_lo(b) -> Fraction:
    if isinstance(b, AlgNum):
        return b.value if b.is_rational else b.lo
    return Fraction(b)


def _simplest_between(x: Fraction, y: Fraction) -> Fraction:
    """A dyadic rational of small height in the open interval (x, y)."""
    if math.floor(x) + 1 < y:
        m = (x + y) / 2
        c = Fraction(round(m))
        if x < c < y:
            return c
        return Fraction(math.floor(x) + 1)
    k = 1
    while True:
        d = 1 << k
        c = Fraction(math.floor(x * d) + 1, d)
        if c < y:
            # prefer the point nearest the middle on this grid
            m = Fraction(round((x + y) / 2 * d), d)
            return m if x < m < y else c
        k += 1
