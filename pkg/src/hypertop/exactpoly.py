"""Exact polynomial arithmetic over Q.

Two representations live here:

* :class:`UPoly`, a dense univariate polynomial with ``int``/``Fraction``
  coefficients stored in ascending order;
* :class:`MPoly`, a sparse multivariate polynomial keyed by exponent tuples.

Heavy computations (subresultant chains of polynomials whose coefficients are
themselves multivariate) run on Kronecker-packed big integers: a polynomial in
``v1..vr`` with bounded degrees and coefficients is mapped injectively to a
single integer by evaluating at ``v1 = 2**W, v2 = 2**(W*K1), ...``.  The map is
a ring homomorphism, so the whole signed-subresultant recurrence with its exact
divisions can be run on those integers and unpacked at the end.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable, Iterable, Sequence

import flint
import gmpy2
from gmpy2 import mpz

Coeff = int | Fraction


class PolyError(ValueError):
    pass


class BothConstantInVar(PolyError):
    pass


class NotDivisible(PolyError):
    pass


def _norm(c) -> Coeff:
    if type(c) is Fraction:
        return c.numerator if c.denominator == 1 else c
    if type(c) is int:
        return c
    if isinstance(c, Fraction):
        return _norm(Fraction(c))
    return int(c)


def parse_rational(s) -> Coeff:
    """Parse ``"a/b"``, ``"a"`` or a number into an exact rational."""
    if isinstance(s, (int, Fraction)):
        return _norm(s)
    if isinstance(s, float):
        raise PolyError("floating point coefficients are not accepted")
    return _norm(Fraction(str(s).strip()))


def rational_str(c: Coeff) -> str:
    c = _norm(c)
    return str(c)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


# --------------------------------------------------------------------------
# integer coefficient-list kernels
# --------------------------------------------------------------------------

def _strip(c: list) -> list:
    while c and not c[-1]:
        c.pop()
    return c


def _pack_width(coeffs: Sequence[int]) -> int:
    m = max((abs(int(x)) for x in coeffs), default=0)
    return m.bit_length() + 2


def _kron_pack(coeffs: Sequence[int], width: int) -> mpz:
    """Signed base-2**width evaluation of a coefficient list."""
    nbytes = width // 8
    off = 1 << (width - 1)
    buf = bytearray()
    for c in coeffs:
        buf += (int(c) + off).to_bytes(nbytes, "little")
    raw = int.from_bytes(bytes(buf), "little")
    offset = int.from_bytes((off.to_bytes(nbytes, "little")) * len(coeffs), "little")
    return mpz(raw - offset)


def _kron_unpack(value, width: int, count: int) -> list[int]:
    nbytes = width // 8
    off = 1 << (width - 1)
    offset = int.from_bytes((off.to_bytes(nbytes, "little")) * count, "little")
    raw = int(value) + offset
    if raw < 0:
        raise PolyError("packed value out of range")
    data = raw.to_bytes(nbytes * count + 1, "little")
    if data[-1]:
        raise PolyError("packed value out of range")
    return [int.from_bytes(data[i * nbytes:(i + 1) * nbytes], "little") - off
            for i in range(count)]


def _round_width(bits: int) -> int:
    return max(16, (bits + 7) // 8 * 8)


def _zmul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    if not a or not b:
        return []
    if min(len(a), len(b)) < 24:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return out
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    bits = ma.bit_length() + mb.bit_length() + min(len(a), len(b)).bit_length() + 2
    w = _round_width(bits)
    prod = _kron_pack(a, w) * _kron_pack(b, w)
    return _strip(_kron_unpack(prod, w, len(a) + len(b) - 1))


def _zdivexact(a: Sequence[int], b: Sequence[int]) -> list[int] | None:
    """Quotient of integer polynomials if ``b`` divides ``a`` over Z, else None."""
    if not b:
        raise ZeroDivisionError
    if not a:
        return []
    n, m = len(a) - 1, len(b) - 1
    if n < m:
        return None
    r = list(a)
    lb = b[-1]
    q = [0] * (n - m + 1)
    for k in range(n - m, -1, -1):
        c = r[k + m]
        if c:
            qq, rem = divmod(c, lb)
            if rem:
                return None
            q[k] = qq
            for i in range(m + 1):
                r[k + i] -= qq * b[i]
    if any(r[:m]):
        return None
    return q


def _zcontent(a: Sequence[int]) -> int:
    g = 0
    for x in a:
        g = math.gcd(g, x)
        if g == 1:
            break
    return g


def _zprimitive(a: Sequence[int]) -> list[int]:
    if not a:
        return []
    g = _zcontent(a)
    if a[-1] < 0:
        g = -g
    return [x // g for x in a]


def _zeval(a: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def _zprem(a: list, b: list) -> list:
    """Pseudo-remainder lc(b)**(deg a - deg b + 1) * a mod b (generic ring)."""
    da, db = len(a) - 1, len(b) - 1
    if da < db:
        return list(a)
    r = list(a)
    lb = b[-1]
    e = da - db + 1
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [lb * x for x in r]
        for i in range(db + 1):
            r[shift + i] -= c * b[i]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0:
        f = lb ** e
        r = [f * x for x in r]
    return r


def _zgcd_prs(a: list[int], b: list[int]) -> list[int]:
    """Primitive PRS gcd over Z; fallback for the heuristic gcd."""
    a, b = _zprimitive(a), _zprimitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _zprem(a, b)
        a, b = b, _zprimitive(r) if r else []
    return _zprimitive(a)


def _zgcd(a: list[int], b: list[int]) -> list[int]:
    """Gcd of integer polynomials (primitive, positive leading coefficient)."""
    if not a:
        return _zprimitive(b)
    if not b:
        return _zprimitive(a)
    if len(a) == 1 or len(b) == 1:
        return [1]
    a, b = _zprimitive(a), _zprimitive(b)
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    xi = 2 * min(ma, mb) + 29
    for _ in range(6):
        h = math.gcd(_zeval(a, xi), _zeval(b, xi))
        if h:
            cand = []
            while h:
                d = h % xi
                if d > xi // 2:
                    d -= xi
                cand.append(d)
                h = (h - d) // xi
            cand = _zprimitive(_strip(cand))
            if cand and _zdivexact(a, cand) is not None and _zdivexact(b, cand) is not None:
                return cand
        xi = xi * 73794 // 27011
    return _zgcd_prs(a, b)


# --------------------------------------------------------------------------
# univariate polynomials
# --------------------------------------------------------------------------

class UPoly:
    """Dense univariate polynomial over Q (ascending coefficient order)."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_norm(x) for x in coeffs]
        self.c = tuple(_strip(c))

    @classmethod
    def _raw(cls, c) -> "UPoly":
        p = object.__new__(cls)
        p.c = tuple(c)
        return p

    @classmethod
    def const(cls, a) -> "UPoly":
        return cls([a])

    @classmethod
    def monomial(cls, k: int, a=1) -> "UPoly":
        return cls([0] * k + [a])

    X = None  # set below

    # -- basic queries -----------------------------------------------------
    @property
    def deg(self) -> int:
        return len(self.c) - 1

    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lc(self) -> Coeff:
        return self.c[-1] if self.c else 0

    def is_zero(self) -> bool:
        return not self.c

    def __bool__(self) -> bool:
        return bool(self.c)

    def __len__(self) -> int:
        return len(self.c)

    def __getitem__(self, k: int) -> Coeff:
        return self.c[k] if 0 <= k < len(self.c) else 0

    def __iter__(self):
        return iter(self.c)

    def __eq__(self, other) -> bool:
        if isinstance(other, UPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == UPoly([other]).c
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.c)

    def __repr__(self) -> str:
        return f"UPoly({[str(x) for x in self.c]})"

    def to_str(self, var: str = "t") -> str:
        if not self.c:
            return "0"
        parts = []
        for k in range(len(self.c) - 1, -1, -1):
            a = self.c[k]
            if not a:
                continue
            mon = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            if mon and a == 1:
                s = mon
            elif mon and a == -1:
                s = "-" + mon
            else:
                s = str(a) if not mon else f"{a}*{mon}"
            parts.append(s)
        return " + ".join(parts).replace("+ -", "- ")

    def is_integral(self) -> bool:
        return all(type(x) is int for x in self.c)

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self) -> "UPoly":
        return UPoly._raw([-x for x in self.c])

    def __add__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            other = UPoly([other])
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, x in enumerate(b):
            out[i] += x
        return UPoly(out)

    __radd__ = __add__

    def __sub__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            other = UPoly([other])
        return self + (-other)

    def __rsub__(self, other) -> "UPoly":
        return (-self) + other

    def __mul__(self, other) -> "UPoly":
        if not isinstance(other, UPoly):
            if isinstance(other, (int, Fraction)):
                if not other:
                    return UPoly()
                return UPoly([x * other for x in self.c])
            return NotImplemented
        if not self.c or not other.c:
            return UPoly()
        if self.is_integral() and other.is_integral():
            return UPoly._raw(_zmul(self.c, other.c))
        da, a = self.integer_form()
        db, b = other.integer_form()
        prod = _zmul(a, b)
        den = da * db
        return UPoly([Fraction(x, den) for x in prod])

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UPoly":
        if n < 0:
            raise ValueError("negative power")
        result = UPoly([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def integer_form(self) -> tuple[int, list[int]]:
        """Return ``(d, coeffs)`` with ``d * self`` integral."""
        d = 1
        for x in self.c:
            if type(x) is Fraction:
                d = _lcm(d, x.denominator)
        if d == 1:
            return 1, list(self.c)
        return d, [int(x * d) for x in self.c]

    def divmod(self, other: "UPoly") -> tuple["UPoly", "UPoly"]:
        if not other.c:
            raise ZeroDivisionError("polynomial division by zero")
        if len(self.c) < len(other.c):
            return UPoly(), self
        if self.is_integral() and other.is_integral() and abs(other.lc) == 1:
            r = list(self.c)
            lb = other.lc
            m = len(other.c) - 1
            q = [0] * (len(r) - m)
            for k in range(len(r) - 1 - m, -1, -1):
                cc = r[k + m] * lb
                if cc:
                    q[k] = cc
                    for i in range(m + 1):
                        r[k + i] -= cc * other.c[i]
            return UPoly(q), UPoly(r[:m])
        r = [Fraction(x) for x in self.c]
        b = other.c
        m = len(b) - 1
        inv = Fraction(1) / Fraction(b[-1])
        q = [Fraction(0)] * (len(r) - m)
        for k in range(len(r) - 1 - m, -1, -1):
            cc = r[k + m] * inv
            if cc:
                q[k] = cc
                for i in range(m + 1):
                    r[k + i] -= cc * b[i]
        return UPoly(q), UPoly(r[:m])

    def __floordiv__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UPoly") -> "UPoly":
        return self.divmod(other)[1]

    def exact_div(self, other: "UPoly") -> "UPoly":
        if self.is_integral() and other.is_integral():
            q = _zdivexact(self.c, other.c)
            if q is not None:
                return UPoly._raw(_strip(q))
        q, r = self.divmod(other)
        if r:
            raise NotDivisible("inexact polynomial division")
        return q

    def divides(self, other: "UPoly") -> bool:
        """True if ``self`` divides ``other``."""
        if not self.c:
            return not other.c
        return not (other % self).c

    # -- calculus and transforms --------------------------------------------
    def derivative(self) -> "UPoly":
        return UPoly([k * self.c[k] for k in range(1, len(self.c))])

    def __call__(self, x):
        acc = 0
        for a in reversed(self.c):
            acc = acc * x + a
        return _norm(acc) if isinstance(acc, (int, Fraction)) else acc

    def compose(self, other: "UPoly") -> "UPoly":
        acc = UPoly()
        for a in reversed(self.c):
            acc = acc * other + a
        return acc

    def shift(self, k: int) -> "UPoly":
        """Multiply by ``t**k``."""
        if not self.c:
            return self
        return UPoly._raw((0,) * k + self.c)

    def reflect(self) -> "UPoly":
        """``p(-t)``."""
        return UPoly._raw([x if k % 2 == 0 else -x for k, x in enumerate(self.c)])

    def scale_var(self, a) -> "UPoly":
        """``p(a t)``."""
        out, pw = [], 1
        for x in self.c:
            out.append(x * pw)
            pw *= a
        return UPoly(out)

    def taylor_shift(self, a) -> "UPoly":
        """``p(t + a)``."""
        c = list(self.c)
        n = len(c)
        for i in range(n):
            for k in range(n - 2, i - 1, -1):
                c[k] += a * c[k + 1]
        return UPoly(c)

    def reverse(self, n: int | None = None) -> "UPoly":
        n = self.deg if n is None else n
        c = list(self.c) + [0] * (n + 1 - len(self.c))
        return UPoly(c[::-1])

    # -- normal forms --------------------------------------------------------
    def content(self) -> Fraction:
        if not self.c:
            return Fraction(0)
        d, ints = self.integer_form()
        return Fraction(_zcontent(ints), d)

    def primitive(self) -> "UPoly":
        """Integer primitive associate with positive leading coefficient."""
        if not self.c:
            return self
        _, ints = self.integer_form()
        return UPoly._raw(_zprimitive(ints))

    def monic(self) -> "UPoly":
        if not self.c:
            return self
        lc = self.c[-1]
        if lc == 1:
            return self
        return UPoly([Fraction(x) / lc for x in self.c])

    def sign_at_infinity(self, direction: int = 1) -> int:
        if not self.c:
            return 0
        s = 1 if self.lc > 0 else -1
        if direction < 0 and self.deg % 2:
            s = -s
        return s

    def multiplicity(self, m: "UPoly") -> tuple[int, "UPoly"]:
        """Largest ``k`` with ``m**k | self`` and the cofactor."""
        if not self.c:
            raise PolyError("multiplicity of zero polynomial")
        k, f = 0, self
        while True:
            q, r = f.divmod(m)
            if r.c:
                return k, f
            k, f = k + 1, q


UPoly.X = UPoly([0, 1])


def upoly_gcd(f: UPoly, g: UPoly) -> UPoly:
    """Gcd normalised to an integer primitive polynomial, positive lc."""
    if not f.c and not g.c:
        return UPoly()
    return UPoly._raw(_zgcd(list(f.primitive().c), list(g.primitive().c)))


def square_free_part(f: UPoly) -> UPoly:
    """Integer primitive square-free part."""
    if f.deg <= 0:
        return UPoly([1]) if f.c else UPoly()
    g = upoly_gcd(f, f.derivative())
    return f.primitive().exact_div(g).primitive()


def xgcd(f: UPoly, g: UPoly) -> tuple[UPoly, UPoly, UPoly]:
    """Extended Euclid over Q: returns (d, u, v) with u f + v g = d monic."""
    r0, r1 = f, g
    s0, s1 = UPoly([1]), UPoly()
    t0, t1 = UPoly(), UPoly([1])
    while r1.c:
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if not r0.c:
        return r0, s0, t0
    inv = Fraction(1) / Fraction(r0.lc)
    return r0 * inv, s0 * inv, t0 * inv


def invmod(a: UPoly, m: UPoly) -> UPoly:
    d, u, _ = xgcd(a % m, m)
    if d.deg != 0:
        raise ZeroDivisionError("element not invertible modulo m")
    return u % m


def factor_irreducible(f: UPoly) -> list[tuple[UPoly, int]]:
    """Irreducible factors over Z of a nonzero polynomial, with multiplicities.

    Factors are integer primitive with positive leading coefficient; the
    constant content is dropped.
    """
    import flint

    if not f.c:
        raise PolyError("cannot factor the zero polynomial")
    if f.deg <= 0:
        return []
    _, ints = f.integer_form()
    _, facs = flint.fmpz_poly(ints).factor()
    out = []
    for fac, e in facs:
        cs = [int(x) for x in fac.coeffs()]
        out.append((UPoly._raw(_zprimitive(cs)), int(e)))
    out.sort(key=lambda fe: (fe[0].deg, fe[0].c))
    return out


# --------------------------------------------------------------------------
# multivariate polynomials
# --------------------------------------------------------------------------

class MPoly:
    """Sparse multivariate polynomial over Q.

    ``vars`` is an ordered tuple of variable names; ``terms`` maps exponent
    tuples (aligned with ``vars``) to nonzero rational coefficients.
    """

    __slots__ = ("vars", "terms")

    def __init__(self, vars: Sequence[str], terms: dict | None = None):
        self.vars = tuple(vars)
        t = {}
        if terms:
            n = len(self.vars)
            for e, c in terms.items():
                if len(e) != n:
                    raise PolyError("exponent arity mismatch")
                c = _norm(c)
                if c:
                    t[tuple(e)] = c
        self.terms = t

    @classmethod
    def _raw(cls, vars, terms) -> "MPoly":
        p = object.__new__(cls)
        p.vars = vars
        p.terms = terms
        return p

    @classmethod
    def const(cls, vars, a) -> "MPoly":
        return cls(vars, {(0,) * len(vars): a})

    @classmethod
    def var(cls, vars, name: str) -> "MPoly":
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return cls(vars, {tuple(e): 1})

    @classmethod
    def from_upoly(cls, u: UPoly, vars, name: str) -> "MPoly":
        vars = tuple(vars)
        i = vars.index(name)
        terms = {}
        for k, c in enumerate(u.c):
            if c:
                e = [0] * len(vars)
                e[i] = k
                terms[tuple(e)] = c
        return cls._raw(vars, terms)

    def to_upoly(self, name: str | None = None) -> UPoly:
        if name is None:
            used = [v for v in self.vars if self.degree(v) > 0]
            if len(used) > 1:
                raise PolyError("not univariate")
            name = used[0] if used else self.vars[0]
        i = self.vars.index(name)
        d = self.degree(name)
        c = [0] * (d + 1)
        for e, a in self.terms.items():
            if any(x for j, x in enumerate(e) if j != i):
                raise PolyError("not univariate in " + name)
            c[e[i]] = a
        return UPoly(c)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, MPoly):
            if self.vars != other.vars:
                other = other.reorder(self.vars)
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MPoly.const(self.vars, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.vars, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"MPoly({self.to_str()})"

    def to_str(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mon = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k)
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")

    def reorder(self, vars: Sequence[str]) -> "MPoly":
        """Express over another variable tuple (must contain the used vars)."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        idx = []
        for v in vars:
            idx.append(self.vars.index(v) if v in self.vars else None)
        for j, v in enumerate(self.vars):
            if v not in vars and self.degree(v) > 0:
                raise PolyError(f"variable {v} is in use")
        terms = {}
        for e, c in self.terms.items():
            terms[tuple(e[i] if i is not None else 0 for i in idx)] = c
        return MPoly._raw(vars, terms)

    def _coerce(self, other) -> "MPoly":
        if isinstance(other, MPoly):
            if other.vars != self.vars:
                return other.reorder(self.vars)
            return other
        if isinstance(other, (int, Fraction)):
            return MPoly.const(self.vars, other)
        if isinstance(other, UPoly):
            if len(self.vars) != 1:
                raise PolyError("ambiguous UPoly coercion")
            return MPoly.from_upoly(other, self.vars, self.vars[0])
        raise TypeError(type(other))

    def __neg__(self) -> "MPoly":
        return MPoly._raw(self.vars, {e: -c for e, c in self.terms.items()})

    def __add__(self, other) -> "MPoly":
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            v = t.get(e, 0) + c
            if v:
                t[e] = _norm(v)
            else:
                t.pop(e, None)
        return MPoly._raw(self.vars, t)

    __radd__ = __add__

    def __sub__(self, other) -> "MPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MPoly":
        return (-self) + other

    def __mul__(self, other) -> "MPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return MPoly(self.vars)
            return MPoly._raw(self.vars, {e: _norm(c * other) for e, c in self.terms.items()})
        other = self._coerce(other)
        if len(self.terms) * len(other.terms) > 4000:
            return _mpoly_mul_packed(self, other)
        t: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MPoly(self.vars, t)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MPoly":
        result = MPoly.const(self.vars, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def degree(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=-1)

    def degrees(self) -> tuple[int, ...]:
        n = len(self.vars)
        return tuple(max((e[i] for e in self.terms), default=-1) for i in range(n))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def coeffs(self, name: str) -> list["MPoly"]:
        """Coefficients with respect to ``name`` (ascending), same var tuple."""
        i = self.vars.index(name)
        d = self.degree(name)
        out = [dict() for _ in range(d + 1)]
        for e, c in self.terms.items():
            k = e[i]
            out[k][e[:i] + (0,) + e[i + 1:]] = c
        return [MPoly._raw(self.vars, t) for t in out]

    @classmethod
    def from_coeffs(cls, vars, name: str, coeffs: Sequence["MPoly"]) -> "MPoly":
        vars = tuple(vars)
        i = vars.index(name)
        t = {}
        for k, c in enumerate(coeffs):
            c = MPoly._coerce(MPoly(vars), c)
            for e, a in c.terms.items():
                if e[i]:
                    raise PolyError("coefficient depends on main variable")
                t[e[:i] + (k,) + e[i + 1:]] = a
        return cls._raw(vars, t)

    def lc_in(self, name: str) -> "MPoly":
        cs = self.coeffs(name)
        return cs[-1] if cs else MPoly(self.vars)

    def subs(self, name: str, value) -> "MPoly":
        """Substitute a number or an MPoly (same var tuple) for ``name``."""
        i = self.vars.index(name)
        if isinstance(value, (int, Fraction)):
            t: dict = {}
            for e, c in self.terms.items():
                ne = e[:i] + (0,) + e[i + 1:]
                t[ne] = t.get(ne, 0) + c * value ** e[i]
            return MPoly(self.vars, t)
        value = self._coerce(value)
        cs = self.coeffs(name)
        acc = MPoly(self.vars)
        for c in reversed(cs):
            acc = acc * value + c
        return acc

    def evaluate(self, point: dict):
        acc = 0
        for e, c in self.terms.items():
            term = c
            for v, k in zip(self.vars, e):
                if k:
                    term = term * point[v] ** k
            acc = acc + term
        return acc

    def derivative(self, name: str) -> "MPoly":
        i = self.vars.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                t[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return MPoly._raw(self.vars, t)

    def integer_form(self) -> tuple[int, "MPoly"]:
        d = 1
        for c in self.terms.values():
            if type(c) is Fraction:
                d = _lcm(d, c.denominator)
        if d == 1:
            return 1, self
        return d, MPoly._raw(self.vars, {e: int(c * d) for e, c in self.terms.items()})

    def primitive(self) -> "MPoly":
        """Integer primitive associate; sign fixed by the lex-largest term."""
        if not self.terms:
            return self
        _, p = self.integer_form()
        g = 0
        for c in p.terms.values():
            g = math.gcd(g, c)
        lead = p.terms[max(p.terms)]
        if lead < 0:
            g = -g
        return MPoly._raw(self.vars, {e: c // g for e, c in p.terms.items()})

    def norm1(self) -> int:
        d, p = self.integer_form()
        return sum(abs(c) for c in p.terms.values())

    def exact_div(self, other: "MPoly") -> "MPoly":
        other = self._coerce(other)
        if not other.terms:
            raise ZeroDivisionError
        if len(other.terms) == 1:
            (e2, c2), = other.terms.items()
            t = {}
            for e, c in self.terms.items():
                ne = tuple(a - b for a, b in zip(e, e2))
                if min(ne) < 0:
                    raise NotDivisible("monomial does not divide")
                t[ne] = Fraction(c) / c2
            return MPoly(self.vars, t)
        return _mpoly_divexact_packed(self, other)


def mpoly_content_in(f: MPoly, keep: str) -> UPoly:
    """Gcd in Q[keep] of the coefficients of f viewed over the other vars."""
    i = f.vars.index(keep)
    groups: dict = {}
    for e, c in f.terms.items():
        key = e[:i] + e[i + 1:]
        groups.setdefault(key, {})[e[i]] = c
    g = UPoly()
    for d in groups.values():
        u = UPoly([d.get(k, 0) for k in range(max(d) + 1)])
        g = upoly_gcd(g, u)
        if g.deg == 0:
            return UPoly([1])
    return g


def mpoly_div_upoly(f: MPoly, u: UPoly, var: str) -> MPoly:
    """Exact division of f by a polynomial in the single variable ``var``."""
    i = f.vars.index(var)
    groups: dict = {}
    for e, c in f.terms.items():
        key = e[:i] + e[i + 1:]
        groups.setdefault(key, {})[e[i]] = c
    t = {}
    for key, d in groups.items():
        p = UPoly([d.get(k, 0) for k in range(max(d) + 1)])
        q = p.exact_div(u)
        for k, c in enumerate(q.c):
            if c:
                t[key[:i] + (k,) + key[i:]] = c
    return MPoly._raw(f.vars, t)


# -- Kronecker packing of MPoly ---------------------------------------------

class _Packing:
    """Injective packing of integer polynomials with bounded degrees/coeffs."""

    def __init__(self, nvars: int, degbounds: Sequence[int], coeff_bits: int):
        self.nvars = nvars
        self.K = [d + 1 for d in degbounds]
        self.width = _round_width(coeff_bits + 2)
        strides, s = [], 1
        for k in self.K:
            strides.append(s)
            s *= k
        self.strides = strides
        self.size = s

    def index(self, e) -> int:
        return sum(a * s for a, s in zip(e, self.strides))

    def pack(self, terms: dict) -> mpz:
        if not terms:
            return mpz(0)
        top = max(self.index(e) for e in terms) + 1
        arr = [0] * top
        for e, c in terms.items():
            arr[self.index(e)] = c
        return _kron_pack(arr, self.width)

    def unpack(self, value) -> dict:
        if not value:
            return {}
        bits = int(abs(value)).bit_length()
        count = min(self.size, bits // self.width + 2)
        arr = _kron_unpack(value, self.width, count)
        out = {}
        for idx, c in enumerate(arr):
            if c:
                e = []
                r = idx
                for k in self.K:
                    e.append(r % k)
                    r //= k
                out[tuple(e)] = c
        return out


def _mpoly_mul_packed(f: MPoly, g: MPoly) -> MPoly:
    df, fi = f.integer_form()
    dg, gi = g.integer_form()
    degs = [a + b for a, b in zip(f.degrees(), g.degrees())]
    bits = (max(abs(c) for c in fi.terms.values()).bit_length()
            + max(abs(c) for c in gi.terms.values()).bit_length()
            + min(len(fi.terms), len(gi.terms)).bit_length() + 1)
    pk = _Packing(len(f.vars), degs, bits)
    prod = pk.pack(fi.terms) * pk.pack(gi.terms)
    t = pk.unpack(prod)
    den = df * dg
    if den != 1:
        t = {e: Fraction(c, den) for e, c in t.items()}
    return MPoly(f.vars, t)


def _mpoly_divexact_packed(f: MPoly, g: MPoly) -> MPoly:
    if not f.terms:
        return MPoly(f.vars)
    df, fi = f.integer_form()
    dg, gi = g.integer_form()
    degs = [a - b for a, b in zip(f.degrees(), g.degrees())]
    if min(degs) < 0:
        raise NotDivisible("degree too small")
    # quotient coefficient size bound via the dividend's size (Gelfond-like slack)
    bits = (max(abs(c) for c in fi.terms.values()).bit_length()
            + sum(degs) + 8 * len(degs) + 16)
    # the packing must also cover the dividend and divisor exponents
    full = [max(a, b) for a, b in zip(f.degrees(), g.degrees())]
    for _ in range(6):
        pk = _Packing(len(f.vars), full, bits)
        a, b = pk.pack(fi.terms), pk.pack(gi.terms)
        q, r = gmpy2.f_divmod(a, b)
        if r == 0:
            qt = pk.unpack(q)
            if all(all(x <= d for x, d in zip(e, degs)) for e in qt):
                check = MPoly(f.vars, qt) * gi
                if check.terms == fi.terms:
                    scale = Fraction(dg, df)
                    return MPoly(f.vars, {e: c * scale for e, c in qt.items()})
        bits *= 2
    raise NotDivisible("multivariate division is not exact")


# --------------------------------------------------------------------------
# subresultants
# --------------------------------------------------------------------------

def _eps(i: int) -> int:
    return -1 if (i * (i - 1) // 2) % 2 else 1


def _signed_subresultants(P: list, Q: list, div: Callable) -> dict:
    """Signed subresultant polynomials sResP_j (Sylvester-Habicht convention).

    ``P``, ``Q`` are ascending coefficient lists over an integral domain whose
    elements support ``+ - *`` and ``div`` (exact division), with
    ``deg P > deg Q >= 0``.  Returns a dict ``j -> list`` for every
    ``0 <= j <= deg P``; zero polynomials are empty lists.
    """
    p, q = len(P) - 1, len(Q) - 1
    assert p > q >= 0
    sres = {p: list(P), p - 1: list(Q)}
    s = {p: 1}
    t = {p: 1, p - 1: Q[-1]}
    s[p - 1] = Q[-1] if q == p - 1 else 0
    for j in range(q + 1, p - 1):
        sres[j] = []
        s[j] = 0
    i, j = p + 1, p
    while sres.get(j - 1):
        k = len(sres[j - 1]) - 1
        A = sres[i - 1]
        B = sres[j - 1]
        if k == j - 1:
            s[j - 1] = t[j - 1]
            c = s[j - 1] * s[j - 1]
        else:
            s[j - 1] = 0
            for d in range(1, j - k):
                v = div(t[j - 1] * t[j - d], s[j])
                t[j - d - 1] = v if d % 2 == 0 else -v
            s[k] = t[k]
            sres[k] = [div(s[k] * x, t[j - 1]) for x in B]
            for ell in range(k + 1, j - 1):
                sres[ell] = []
                s[ell] = 0
            c = t[j - 1] * s[k]
        # -Rem(c A, B) / (s_j t_{i-1})
        if k == 0:
            nxt = []
        else:
            r = _zprem(A, B)
            e = len(A) - len(B) + 1
            den = (B[-1] ** e) * s[j] * t[i - 1]
            nxt = [div(-c * x, den) for x in r]
            while nxt and nxt[-1] == 0:
                nxt.pop()
        sres[k - 1] = nxt
        t[k - 1] = nxt[-1] if nxt else 0
        i, j = j, k
        if k == 0:
            break
    for ell in range(0, p + 1):
        sres.setdefault(ell, [])
    return sres


def _collins_chain(P: list, Q: list, div: Callable) -> list:
    """Collins subresultants S_0..S_{min(p,q)-1} for lists over a domain.

    The convention is the determinant of the matrix with rows
    ``x^(q-j-1) P, ..., P, x^(p-j-1) Q, ..., Q`` (both blocks in decreasing
    shift order).
    """
    p, q = len(P) - 1, len(Q) - 1
    if p < q:
        chain = _collins_chain(Q, P, div)
        out = []
        for j, S in enumerate(chain):
            sg = -1 if ((p - j) * (q - j)) % 2 else 1
            out.append([-x for x in S] if sg < 0 else S)
        return out
    if p == q:
        lp, lq = P[-1], Q[-1]
        G = [lp * b - lq * a for a, b in zip(P, Q)]
        while G and G[-1] == 0:
            G.pop()
        n = p
        out: list = [[] for _ in range(n)]
        if n >= 1:
            out[n - 1] = list(G)
        if not G:
            return out
        qq = len(G) - 1
        # S_qq(P, G) = lc(G)^(n - qq - 1) G
        if qq < n - 1:
            top = G[-1] ** (n - qq - 1)
            out[qq] = [top * x for x in G]
        if qq == 0:
            return out
        sub = _collins_chain(P, G, div)  # S_j(P, G), j < qq
        for jj in range(qq):
            powr = P[-1] ** (qq - jj)
            out[jj] = [div(x, powr) for x in sub[jj]]
        return out
    sres = _signed_subresultants(P, Q, div)
    return [[x for x in sres[j]] if _eps(p - j) > 0 else [-x for x in sres[j]]
            for j in range(q)]


def upoly_subresultants(f: UPoly, g: UPoly) -> list[UPoly]:
    """Collins subresultants S_0..S_{min-1} of two univariate polynomials."""
    if f.deg < 1 and g.deg < 1:
        raise BothConstantInVar("both polynomials are constant")
    df, fi = f.integer_form()
    dg, gi = g.integer_form()
    P = [mpz(x) for x in fi]
    Q = [mpz(x) for x in gi]
    chain = _collins_chain(P, Q, gmpy2.divexact)
    out = []
    for j, S in enumerate(chain):
        scale = Fraction(1, df ** (g.deg - j) * dg ** (f.deg - j))
        out.append(UPoly([Fraction(int(x)) * scale for x in S]))
    return out


def upoly_resultant(f: UPoly, g: UPoly) -> Coeff:
    if f.deg < 1 and g.deg < 1:
        raise BothConstantInVar("both polynomials are constant")
    if not f.c or not g.c:
        return 0
    if f.deg == 0:
        return _norm(f.lc ** g.deg)
    if g.deg == 0:
        return _norm(g.lc ** f.deg)
    return upoly_subresultants(f, g)[0][0]


def _split_main(f: MPoly, var: str):
    others = tuple(v for v in f.vars if v != var)
    cs = f.coeffs(var)
    return others, [c.reorder(others) if others else c for c in cs]


def subresultant_chain(f: MPoly, g: MPoly, var: str) -> list[MPoly]:
    """Collins subresultants S_0..S_{min(deg f, deg g)-1} of f, g w.r.t. var.

    The result polynomials live over ``f.vars``.  ``S_j`` has degree at most
    ``j`` in ``var``.
    """
    if f.vars != g.vars:
        g = g.reorder(f.vars)
    n1, n2 = f.degree(var), g.degree(var)
    if n1 < 1 and n2 < 1:
        raise BothConstantInVar(f"both polynomials are constant in {var}")
    if n1 < 1 or n2 < 1:
        return []
    vars_all = f.vars
    df, fi = f.integer_form()
    dg, gi = g.integer_form()
    others = tuple(v for v in vars_all if v != var)
    fc = fi.coeffs(var)
    gc = gi.coeffs(var)
    if not others:
        chain = upoly_subresultants(fi.to_upoly(var), gi.to_upoly(var))
        out = [MPoly.from_upoly(S, vars_all, var) for S in chain]
    else:
        oidx = [vars_all.index(v) for v in others]

        def sub_terms(c: MPoly) -> dict:
            return {tuple(e[i] for i in oidx): a for e, a in c.terms.items()}

        fts = [sub_terms(c) for c in fc]
        gts = [sub_terms(c) for c in gc]
        # degree bounds in the other variables for every subresultant
        nv = len(others)
        degf = [max((e[k] for t in fts for e in t), default=0) for k in range(nv)]
        degg = [max((e[k] for t in gts for e in t), default=0) for k in range(nv)]
        degb = [n2 * a + n1 * b for a, b in zip(degf, degg)]
        # coefficient bound: product of row 2-norms of row 1-norms
        rf = sum(sum(abs(a) for a in t.values()) ** 2 for t in fts)
        rg = sum(sum(abs(a) for a in t.values()) ** 2 for t in gts)
        bits = (n2 * rf.bit_length() + n1 * rg.bit_length()) // 2 + 4
        pk = _Packing(nv, degb, bits)
        P = [pk.pack(t) for t in fts]
        Q = [pk.pack(t) for t in gts]
        chain = _collins_chain(P, Q, gmpy2.divexact)
        out = []
        vi = vars_all.index(var)
        for S in chain:
            terms = {}
            for k, val in enumerate(S):
                for e, a in pk.unpack(val).items():
                    full = [0] * len(vars_all)
                    for i, x in zip(oidx, e):
                        full[i] = x
                    full[vi] = k
                    terms[tuple(full)] = a
            out.append(MPoly._raw(vars_all, terms))
    if df != 1 or dg != 1:
        scaled = []
        for j, S in enumerate(out):
            sc = Fraction(1, df ** (n2 - j) * dg ** (n1 - j))
            scaled.append(S * sc)
        out = scaled
    return out


def resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Sylvester resultant Res_var(f, g)."""
    if f.vars != g.vars:
        g = g.reorder(f.vars)
    n1, n2 = f.degree(var), g.degree(var)
    if n1 < 1 and n2 < 1:
        raise BothConstantInVar(f"both polynomials are constant in {var}")
    if not f.terms or not g.terms:
        return MPoly(f.vars)
    if n1 == 0:
        return f ** n2
    if n2 == 0:
        return g ** n1
    return _flint_resultant(f, g, var)


def _flint_resultant(f: MPoly, g: MPoly, var: str) -> MPoly:
    """Resultant via FLINT on integer forms, rescaled to the rational inputs."""
    n1, n2 = f.degree(var), g.degree(var)
    df, fi = f.integer_form()
    dg, gi = g.integer_form()
    ctx = flint.fmpz_mpoly_ctx.get(f.vars, "lex")
    ff = ctx.from_dict({e: int(c) for e, c in fi.terms.items()})
    gg = ctx.from_dict({e: int(c) for e, c in gi.terms.items()})
    r = ff.resultant(gg, var)
    scale = Fraction(1, df ** n2 * dg ** n1)
    out = {}
    for e, c in r.to_dict().items():
        out[tuple(int(x) for x in e)] = _norm(Fraction(int(c)) * scale)
    return MPoly(f.vars, out)


def first_subresultant_coeffs(f: MPoly, g: MPoly, var: str) -> tuple[MPoly, MPoly]:
    """Coefficients of var^1 and var^0 in the first subresultant Subres_1.

    When one input has degree one in ``var`` the first subresultant is that
    input scaled by the customary power of the other leading coefficient.
    """
    n1, n2 = f.degree(var), g.degree(var)
    if n1 < 1 or n2 < 1:
        raise PolyError("first subresultant needs positive degrees")
    if min(n1, n2) >= 2:
        S1 = subresultant_chain(f, g, var)[1]
    elif n1 > n2:  # n2 == 1
        S1 = g * (g.lc_in(var) ** (n1 - 2)) if n1 >= 2 else g
    elif n2 > n1:  # n1 == 1
        S1 = f * (f.lc_in(var) ** (n2 - 2))
    else:
        S1 = g
    cs = S1.coeffs(var) + [MPoly(f.vars), MPoly(f.vars)]
    return cs[1], cs[0]


def primitive_in(f: MPoly, var: str) -> MPoly:
    """Divide out the content lying in Q[var], then normalise over Z."""
    c = mpoly_content_in(f, var)
    if c.deg > 0:
        f = mpoly_div_upoly(f, c, var)
    return f.primitive()
