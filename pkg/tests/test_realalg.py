import math
import random
from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st
from oracles import sturm_count
from strategies import random_upoly, upolys

from hypertop.curvedef import CElem
from hypertop.exactpoly import MPoly, UPoly, square_free_part
from hypertop.realalg import (RI, AlgNum, Branch, GPoint, _int_coeffs, _isolate_arb,
                              _isolate_descartes, compare, count_roots_in, isolate_real_roots,
                              isolate_real_roots_sqfree, poly_range, rational_between,
                              reduce_mod_curve, sign_at, solve_on_curve, sort_algnums)


def _check_isolation(f: UPoly, roots: list[AlgNum]) -> None:
    for a in roots:
        if a.is_rational:
            assert f(a.value) == 0
        else:
            assert sturm_count(a.defpoly, a.lo, a.hi) == 1
            assert sign_at(f, a) == 0


def test_root_count_matches_sturm_on_100_polynomials():
    rng = random.Random(99)
    for _ in range(100):
        f = random_upoly(rng, rng.randint(1, 12), bits=rng.choice([4, 8, 16]))
        roots = isolate_real_roots(f)
        assert len(roots) == sturm_count(square_free_part(f))
        _check_isolation(f, roots)
        # sorted and pairwise distinct
        for a, b in zip(roots, roots[1:]):
            assert compare(a, b) < 0


def _to_sets(items):
    out = []
    for it in items:
        out.append((it, it) if isinstance(it, Fraction) else it)
    return sorted(out)


def test_arb_and_descartes_routes_agree():
    """Both isolation routes find the same roots (each interval of one route
    overlaps exactly one interval of the other)."""
    rng = random.Random(5)
    compared = 0
    for _ in range(80):
        f = square_free_part(random_upoly(rng, rng.randint(3, 20), bits=10))
        if f.deg < 2:
            continue
        c = _int_coeffs(f)
        arb = _isolate_arb(c)
        desc = _isolate_descartes(c)
        if arb is None:
            continue
        A, D = _to_sets(arb), _to_sets(desc)
        assert len(A) == len(D) == sturm_count(f)
        for (alo, ahi), (dlo, dhi) in zip(A, D):
            assert max(alo, dlo) <= min(ahi, dhi)
        compared += 1
    assert compared >= 40


@given(upolys(min_deg=1, max_deg=9, bits=8))
def test_sqfree_isolation_without_factoring(f):
    roots = isolate_real_roots_sqfree(f)
    assert len(roots) == sturm_count(square_free_part(f))


@given(upolys(min_deg=1, max_deg=8),
       st.fractions(min_value=-20, max_value=20, max_denominator=16),
       st.fractions(min_value=Fraction(1, 8), max_value=30, max_denominator=16))
def test_descartes_bound_dominates_sturm(f, lo, w):
    f = square_free_part(f)
    hi = lo + w
    exact = sturm_count(f, lo, hi) - (1 if f(hi) == 0 else 0)
    bound = count_roots_in(f, lo, hi)
    assert bound >= exact and (bound - exact) % 2 == 0


@given(st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=2, max_size=5,
                unique=True))
def test_compare_orders_constructed_roots(vals):
    # each value is paired with sqrt(2)-shifted companions: x + sqrt(2)/k
    nums = []
    for k, v in enumerate(vals, start=1):
        # root of (k (x - v))^2 - 2 above v
        f = UPoly([k * k * v * v - 2, -2 * k * k * v, k * k])
        r = [a for a in isolate_real_roots(f) if compare(a, AlgNum.rational(v)) > 0][0]
        nums.append((float(v) + math.sqrt(2) / k, r))
    ordered = sort_algnums([r for _, r in nums])
    floats = sorted(x for x, _ in nums)
    assert all(abs(float(r) - x) < 1e-12 for r, x in zip(ordered, floats))


def test_compare_same_polynomial_with_shared_endpoint():
    f = UPoly([-2, 0, 1])
    a = AlgNum(f, 1, 2, irreducible=True)
    b = AlgNum(f, Fraction(5, 4), Fraction(3, 2), irreducible=True)
    assert compare(a, b) == 0
    c = AlgNum(f, -2, -1, irreducible=True)
    assert compare(c, a) < 0 and compare(a, c) > 0
    # reducible defpoly with a rational root at the left end of one interval
    g = UPoly([0, -2, 0, 1])           # t (t^2 - 2)
    z = AlgNum(g, -1, 0)
    w = AlgNum(g, 0, 2)
    assert compare(z, w) < 0
    assert compare(z, AlgNum.rational(0)) == 0


@given(upolys(min_deg=1, max_deg=7), upolys(min_deg=1, max_deg=5))
def test_sign_at_matches_interval_evaluation(f, g):
    for a in isolate_real_roots(f):
        s = sign_at(g, a)
        a2 = a.copy().refine(Fraction(1, 10 ** 40))
        lo, hi = poly_range(g, a2.interval().lo, a2.interval().hi)
        if s == 0:
            assert lo <= 0 <= hi
        else:
            assert lo > 0 if s > 0 else hi < 0


def test_rational_between():
    f = UPoly([-2, 0, 1])
    r1, r2 = isolate_real_roots(f)
    m = rational_between(r1, r2)
    assert compare(r1, AlgNum.rational(m)) < 0 < compare(r2, AlgNum.rational(m))
    assert rational_between(None, r1) < r1.lo
    assert rational_between(r2, None) > r2.hi


def test_interval_arithmetic_contains_products():
    a, b = RI(Fraction(-1), Fraction(2)), RI(Fraction(3), Fraction(5))
    prod = a * b
    for x in (-1, 0, 2):
        for y in (3, 4, 5):
            assert prod.lo <= x * y <= prod.hi


# -- systems on the curve -------------------------------------------------------------

def test_solve_on_curve_hand_example():
    # s = t on s^2 = t^3 - t: t = 0 and t = (1 +- sqrt 5) / 2
    p = UPoly([0, -1, 0, 1])
    pts = solve_on_curve((UPoly([0, -1]), UPoly([1])), p)
    got = [(round(q.approx(p)[0], 9), q.branch) for q in pts]
    phi = (1 + math.sqrt(5)) / 2
    assert got == [(round(1 - phi, 9), Branch.MINUS), (0.0, Branch.ZERO), (round(phi, 9), Branch.PLUS)]


def _random_system(rng):
    while True:
        p = random_upoly(rng, rng.randint(1, 6), bits=4)
        if square_free_part(p).deg == p.deg:
            break
    A = random_upoly(rng, rng.randint(0, 5), bits=5)
    B = random_upoly(rng, rng.randint(0, 4), bits=5)
    return p, A, B


def test_solve_on_curve_membership_numeric_and_exact():
    rng = random.Random(17)
    total = 0
    for _ in range(60):
        p, A, B = _random_system(rng)
        for q in solve_on_curve((A, B), p):
            # exact membership
            assert CElem(A, B).vanishes_at(q, p)
            # numeric residual after refining the point
            t = q.t.copy().refine(Fraction(1, 10 ** 12))
            s_iv = GPoint(t, q.branch).s_interval(p, bits=80)
            assert s_iv.width <= Fraction(1, 10 ** 6) or q.branch is Branch.ZERO
            tv, sv = float(t.approx(20)), float(s_iv.mid)
            M = float(A(Fraction(tv))) + sv * float(B(Fraction(tv)))
            assert abs(M) < 1e-3
            total += 1
    assert total > 20


@given(st.integers(min_value=0, max_value=10 ** 6), st.fractions(max_denominator=50).filter(bool))
def test_solve_on_curve_invariant_under_scaling(seed, c):
    rng = random.Random(seed)
    p, A, B = _random_system(rng)
    assume(not (A.is_zero() and B.is_zero()))
    P1 = solve_on_curve((A, B), p)
    P2 = solve_on_curve((A * c, B * c), p)
    assert len(P1) == len(P2)
    for q1, q2 in zip(P1, P2):
        assert q1.same_as(q2)


def test_reduce_mod_curve_matches_substitution():
    rng = random.Random(8)
    vs = ("t", "s")
    for _ in range(20):
        p = random_upoly(rng, rng.randint(1, 5), bits=5)
        terms = {(rng.randint(0, 4), rng.randint(0, 5)): rng.randint(-9, 9) for _ in range(6)}
        M = MPoly(vs, terms)
        A, B = reduce_mod_curve(M, p)
        # compare at points with s^2 = p(t) for rational t where p is a square
        for t0 in range(-3, 4):
            pv = p(Fraction(t0))
            for s0 in (Fraction(1), Fraction(-2)):
                # evaluate M at (t0, s0) on the curve s^2 = s0^2 shifted
                lhs = M.evaluate({"t": t0, "s": s0})
                # replace p by the constant polynomial s0^2 - p(t0) + p(t)
                p_shift = p + (s0 * s0 - pv)
                A2, B2 = reduce_mod_curve(M, p_shift)
                assert A2(Fraction(t0)) + s0 * B2(Fraction(t0)) == lhs
        assert A.deg <= 4 + 5 // 2 * p.deg
