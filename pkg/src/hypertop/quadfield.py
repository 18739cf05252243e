"""Exact arithmetic in Q(sqrt(c)) and polynomials over it."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .exactpoly import MPoly


@dataclass(frozen=True)
class QS:
    """a + b sqrt(c) with rational a, b and a fixed non-square integer c."""

    a: Fraction
    b: Fraction
    c: int

    def __add__(self, o: "QS") -> "QS":
        o = self._lift(o)
        return QS(self.a + o.a, self.b + o.b, self.c)

    def __sub__(self, o: "QS") -> "QS":
        o = self._lift(o)
        return QS(self.a - o.a, self.b - o.b, self.c)

    def __neg__(self) -> "QS":
        return QS(-self.a, -self.b, self.c)

    def __mul__(self, o) -> "QS":
        o = self._lift(o)
        return QS(self.a * o.a + self.b * o.b * self.c, self.a * o.b + self.b * o.a, self.c)

    __rmul__ = __mul__
    __radd__ = __add__

    def _lift(self, o) -> "QS":
        if isinstance(o, QS):
            return o
        return QS(Fraction(o), Fraction(0), self.c)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def inv(self) -> "QS":
        n = self.a * self.a - self.b * self.b * self.c
        if n == 0:
            raise ZeroDivisionError
        return QS(self.a / n, -self.b / n, self.c)

    def __truediv__(self, o) -> "QS":
        return self * self._lift(o).inv()

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.c)


def _strip(c: list[QS]) -> list[QS]:
    while c and c[-1].is_zero():
        c.pop()
    return c


class QSqrtPoly:
    """Helpers for polynomials over Q(sqrt(c)) as ascending lists of QS."""

    @staticmethod
    def specialise(F: MPoly, env: dict, var: str) -> list[QS]:
        c = next(iter(env.values())).c
        deg = F.degree(var)
        vi = F.vars.index(var)
        out = [QS(Fraction(0), Fraction(0), c) for _ in range(max(deg, 0) + 1)]
        cache: dict = {}
        for e, coef in F.terms.items():
            term = QS(Fraction(coef), Fraction(0), c)
            for name, k in zip(F.vars, e):
                if name == var or not k:
                    continue
                key = (name, k)
                if key not in cache:
                    base = env[name]
                    acc = QS(Fraction(1), Fraction(0), c)
                    for _ in range(k):
                        acc = acc * base
                    cache[key] = acc
                term = term * cache[key]
            out[e[vi]] = out[e[vi]] + term
        return _strip(out)

    @staticmethod
    def rem(a: list[QS], b: list[QS]) -> list[QS]:
        a = list(a)
        inv = b[-1].inv()
        while len(a) >= len(b) and a:
            f = a[-1] * inv
            sh = len(a) - len(b)
            for i, bc in enumerate(b):
                a[sh + i] = a[sh + i] - f * bc
            a.pop()
            _strip(a)
        return a

    @staticmethod
    def gcd(a: list[QS], b: list[QS]) -> list[QS]:
        a, b = _strip(list(a)), _strip(list(b))
        while b:
            a, b = b, QSqrtPoly.rem(a, b)
        if a:
            inv = a[-1].inv()
            a = [x * inv for x in a]
        return a

    @staticmethod
    def derivative(a: list[QS]) -> list[QS]:
        return _strip([a[k] * k for k in range(1, len(a))])

    @staticmethod
    def gcd_degree(a: list[QS], b: list[QS]) -> int:
        """Number of distinct common roots (over C)."""
        g = QSqrtPoly.gcd(a, b)
        if len(g) <= 1:
            return 0
        h = QSqrtPoly.gcd(g, QSqrtPoly.derivative(g))
        return (len(g) - 1) - (len(h) - 1 if h else 0)


def sqrt_field_value(comp, t0: Fraction, sign: int, c: int, scale: Fraction) -> QS:
    """Value of a component at (t0, sign * scale * sqrt(c))."""
    s = QS(Fraction(0), Fraction(sign) * scale, c)
    num = QS(Fraction(comp.a1(t0)), Fraction(0), c) + s * Fraction(comp.a2(t0))
    den = QS(Fraction(comp.b1(t0)), Fraction(0), c) + s * Fraction(comp.b2(t0))
    if den.is_zero():
        raise ZeroDivisionError
    return num / den


def sample_point(comps, curve, rng: random.Random, attempts: int = 200):
    """Image of a random real point of G whose s-coordinate is irrational.

    Returns (x0, y0) in Q(sqrt(c)) or None.
    """
    p = curve.p
    for _ in range(attempts):
        t0 = Fraction(rng.randint(-400, 400), rng.randint(1, 40))
        v = Fraction(p(t0))
        if v <= 0:
            continue
        # sqrt(v) = sqrt(num * den) / den
        radicand = v.numerator * v.denominator
        r = math.isqrt(radicand)
        if r * r == radicand:
            continue
        sign = rng.choice((1, -1))
        scale = Fraction(1, v.denominator)
        try:
            vals = [sqrt_field_value(c, t0, sign, radicand, scale) for c in comps]
        except ZeroDivisionError:
            continue
        return vals[0], vals[1]
    return None
