import math
import random
from fractions import Fraction

import pytest
from strategies import random_upoly

from hypertop.curvedef import (BothComponentsDegenerate, CElem, ConstantPolynomial,
                               DenominatorVanishesOnCurve, HMap, NotReal, NotSquareFree,
                               base_points, birational_check, canonical_component,
                               component_base_points, from_quadratic, new_curve, pole_points)
from hypertop.curvespec import corpus_names, load_corpus
from hypertop.eliminants import build_xi
from hypertop.exactpoly import UPoly, square_free_part
from hypertop.realalg import solve_on_curve

T = UPoly([0, 1])
ONE = UPoly([1])
ZERO = UPoly()


def test_new_curve_errors():
    with pytest.raises(NotSquareFree):
        new_curve([1, 2, 1])
    with pytest.raises(ConstantPolynomial):
        new_curve([5])
    with pytest.raises(NotReal):
        new_curve([-1, 0, -1])
    assert new_curve(["1", "0", "0", "1"]).genus == 1


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_genus(name):
    spec = load_corpus(name)
    curve, _ = spec.build()
    assert curve.genus == math.ceil(curve.p.deg / 2) - 1
    assert curve.genus == spec.expected["genus"]


def test_canonical_component_normal_form():
    # (2t + 2t^2) / (2 + 2t): common factor (1 + t) and content 2 removed
    c = canonical_component(UPoly([0, 2, 2]), ZERO, UPoly([2, 2]), ZERO)
    assert (c.a1, c.b1) == (T, ONE)
    # s-free value written with s: (s t) / (s) -> t
    c = canonical_component(ZERO, T, ZERO, ONE)
    assert c.is_s_free() and c.a1 == T and c.b1 == ONE and c.b2.is_zero()
    # a negative leading denominator coefficient is normalised away
    c = canonical_component(T, ZERO, UPoly([0, -3]) + UPoly([1]), ZERO)
    assert c.b1.lc > 0
    with pytest.raises(DenominatorVanishesOnCurve):
        canonical_component(T, ZERO, ZERO, ZERO)


def test_reduce_differs_by_unit():
    """Reducing (u + s v) * (u' + s v') through CElem.mul matches the
    substitution s^2 = p evaluated on curve points."""
    rng = random.Random(4)
    for _ in range(20):
        p = random_upoly(rng, 3, bits=4)
        a = CElem(random_upoly(rng, 2, 4), random_upoly(rng, 2, 4))
        b = CElem(random_upoly(rng, 2, 4), random_upoly(rng, 2, 4))
        prod = a.mul(b, p)
        for t0 in (Fraction(-2), Fraction(1, 3), Fraction(5)):
            pv = p(t0)
            # any s0 with s0^2 = p(t0): use the formal identity in Q(sqrt(pv))
            # (u1 + s v1)(u2 + s v2) = u1 u2 + pv v1 v2 + s (u1 v2 + u2 v1)
            u1, v1, u2, v2 = a.u(t0), a.v(t0), b.u(t0), b.v(t0)
            assert prod.u(t0) == u1 * u2 + pv * v1 * v2
            assert prod.v(t0) == u1 * v2 + u2 * v1


def test_base_and_pole_points_disjoint_on_corpus():
    for name in corpus_names():
        curve, hmap = load_corpus(name).build()
        for comp in hmap.components:
            bases = component_base_points(comp, curve)
            poles = pole_points(comp, curve)
            candidates = solve_on_curve((comp.b1, comp.b2), curve.p) if not (
                comp.b1.is_zero() and comp.b2.is_zero()) else []
            for q in bases:
                assert any(q.same_as(c) for c in candidates)
                assert not any(q.same_as(r) for r in poles)
            for q in poles:
                assert any(q.same_as(c) for c in candidates)


def test_base_points_constructed():
    # x = (s - 1) / t on s^2 = t^3 + 1: 0/0 at (0, 1), a pole at (0, -1)
    curve = new_curve([1, 0, 0, 1])
    comp = canonical_component(UPoly([-1]), ONE, T, ZERO)
    bases = component_base_points(comp, curve)
    poles = pole_points(comp, curve)
    assert [(float(q.t), q.branch.sign) for q in bases] == [(0.0, 1)]
    assert [(float(q.t), q.branch.sign) for q in poles] == [(0.0, -1)]
    assert [(i, q.branch.sign) for i, q in base_points(HMap([comp, comp]), curve)] == [(0, 1), (1, 1)]
    # a common polynomial factor is cancelled by the normal form instead
    comp = canonical_component(UPoly([0, -1, 1]), ZERO, UPoly([-1, 1]), ZERO)
    assert component_base_points(comp, curve) == []


def _random_sq_free(rng, deg):
    while True:
        p = random_upoly(rng, deg, bits=4)
        if square_free_part(p).deg == p.deg and p.deg == deg:
            try:
                return new_curve(p)
            except Exception:
                continue


def test_birational_identity_like_and_planted_double_covers():
    rng = random.Random(2024)
    for _ in range(20):
        # identity-like: x = t + r, y = s a(t) + b(t)
        curve = _random_sq_free(rng, rng.randint(3, 5))
        a = random_upoly(rng, rng.randint(0, 2), bits=4)
        b = random_upoly(rng, rng.randint(0, 2), bits=4)
        x = canonical_component(T + UPoly([rng.randint(-3, 3)]), ZERO, ONE, ZERO)
        y = canonical_component(b, a, ONE, ZERO)
        assert birational_check(HMap([x, y]), curve, seed=rng.randint(0, 99))
        # planted 2:1: p even, map through t^2
        q = random_upoly(rng, rng.randint(1, 2), bits=4)
        pe = q.compose(UPoly([0, 0, 1]))
        if square_free_part(pe).deg != pe.deg:
            continue
        try:
            ecurve = new_curve(pe)
        except Exception:
            continue
        t2 = UPoly([0, 0, 1])
        x2 = canonical_component(t2 + UPoly([1]), ZERO, ONE, ZERO)
        y2 = canonical_component(ZERO, t2 + UPoly([rng.randint(1, 3)]), ONE, ZERO)
        assert not birational_check(HMap([x2, y2]), ecurve, seed=rng.randint(0, 99))


def test_both_components_s_free_is_not_birational():
    curve = new_curve([1, 0, 0, 1])
    x = canonical_component(T, ZERO, ONE, ZERO)
    y = canonical_component(T * T, ZERO, ONE, ZERO)
    assert not birational_check(HMap([x, y]), curve)
    with pytest.raises(BothComponentsDegenerate):
        build_xi(HMap([x, y]), curve)


def test_from_quadratic_completes_the_square():
    # s^2 + t s - (t^3 + 1) = 0  ->  s_new = 2 s + t, s_new^2 = t^2 + 4 t^3 + 4
    psi1, psi2, psi3 = ONE, T, -UPoly([1, 0, 0, 1])
    comps = [(T, ZERO, ONE, ZERO), (ZERO, ONE, ONE, ZERO)]    # (t, s_old)
    curve, sub, new = from_quadratic(psi1, psi2, psi3, comps)
    assert curve.p == T * T + UPoly([4, 0, 0, 4])
    assert not sub.warnings
    # check y = s_old = (s_new - t) / 2 numerically at t = 2
    t0 = Fraction(2)
    s_new = math.sqrt(float(curve.p(t0)))
    y = new[1]
    val = (float(y.a1(t0)) + s_new * float(y.a2(t0))) / (float(y.b1(t0)) + s_new * float(y.b2(t0)))
    s_old = (s_new - 2) / 2
    assert abs(val - s_old) < 1e-12
    assert abs(s_old ** 2 + 2 * s_old - 9) < 1e-9


def test_from_quadratic_warns_on_vanishing_leading_coefficient():
    _, sub, _ = from_quadratic(T, ONE, UPoly([1, 0, 1]), [])
    assert sub.warnings and "degenerates" in sub.warnings[0]
