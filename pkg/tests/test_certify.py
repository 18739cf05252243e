import random
from fractions import Fraction

import pytest
from strategies import random_upoly

from hypertop.algfield import PointField, identify_root
from hypertop.certify import Coord, InfiniteCoordinate, group_coincident, images_equal
from hypertop.cli import run_topology
from hypertop.curvespec import corpus_names, load_corpus
from hypertop.exactpoly import UPoly, factor_irreducible
from hypertop.numeric import FloatMap
from hypertop.realalg import AlgNum, compare, isolate_real_roots


def _random_point_field(rng):
    """A residue field at a real point with an irrational t of degree 2..5."""
    while True:
        m = random_upoly(rng, rng.randint(2, 5), bits=4)
        for fac, _ in factor_irreducible(m):
            if fac.deg < 2:
                continue
            for r in isolate_real_roots(fac):
                P = random_upoly(rng, rng.randint(1, 4), bits=4)
                sp = P(Fraction(r.approx(30)))
                if sp > Fraction(1, 100):
                    # P is positive at the root: both branches exist
                    return PointField(r, rng.choice((1, -1)), P)


def test_charpoly_and_resultant_routes_agree():
    rng = random.Random(31)
    for _ in range(25):
        F = _random_point_field(rng)
        e = F.elem(random_upoly(rng, rng.randint(0, 4), 5), random_upoly(rng, rng.randint(0, 4), 5))
        chi = e.charpoly()
        res = e.defining_polynomial_resultant()
        # Res_t(m, (D v - A)^2 - P B^2) = const * D^(2k) * charpoly(v)
        assert chi.deg == res.deg
        assert chi * res.lc == res * chi.lc
        # both identify the same real algebraic number
        a1 = identify_root(chi, e.enclosure, F.refine)
        a2 = identify_root(res, e.enclosure, F.refine)
        assert compare(a1, a2) == 0


def test_field_inverse_and_zero_test():
    rng = random.Random(5)
    for _ in range(25):
        F = _random_point_field(rng)
        e = F.elem(random_upoly(rng, 3, 5), random_upoly(rng, 2, 5))
        if e.is_zero():
            continue
        one = e * e.inv()
        assert (one - F.one()).is_zero()
        # a + s b with b != 0 vanishing exactly: s0 - s0
        s = F.elem(0, 1)
        assert (s - s).is_zero()
        assert not s.is_zero()


def test_to_algnum_lies_in_enclosure():
    rng = random.Random(6)
    for _ in range(20):
        F = _random_point_field(rng)
        e = F.elem(random_upoly(rng, 3, 5), random_upoly(rng, 2, 5))
        a = e.to_algnum()
        for _ in range(5):
            F.refine()
        enc = e.enclosure()
        assert a.interval().overlaps(enc)


def _const_coord(F, x):
    return Coord(F.elem(UPoly([x])))


def test_planted_equal_values_from_different_fields():
    # sqrt 2 as t0 with m = t^2 - 2, as t0 / 2 with m = t^2 - 8 and as s0 at t0 = 0
    r2 = [r for r in isolate_real_roots(UPoly([-2, 0, 1])) if r.sign() > 0][0]
    r8 = [r for r in isolate_real_roots(UPoly([-8, 0, 1])) if r.sign() > 0][0]
    P = UPoly([2, 1])
    F1 = PointField(r2, 1, UPoly([5, 0, 1]))
    F2 = PointField(r8, -1, UPoly([5, 0, 1]))
    F3 = PointField(AlgNum.rational(0), 1, P)
    F4 = PointField(AlgNum.rational(0), -1, P)
    A = [Coord(F1.elem(UPoly([0, 1])))]
    B = [Coord(F2.elem(UPoly([0, Fraction(1, 2)])))]
    C = [Coord(F3.elem(0, 1))]
    D = [Coord(F4.elem(0, 1))]
    assert images_equal(A, B) and images_equal(B, C) and images_equal(A, C)
    assert not images_equal(A, D)
    # a quotient representation: (2 t) / 2 at the same point
    E = [Coord(F1.elem(UPoly([0, 2])), F1.elem(UPoly([2])))]
    assert images_equal(A, E)


def test_near_miss_is_not_equal():
    F = PointField(AlgNum.rational(0), 0, UPoly([0, 1]))
    a = [_const_coord(F, Fraction(1, 3))]
    b = [_const_coord(F, Fraction(1, 3) + Fraction(1, 10 ** 30))]
    assert not images_equal(a, b)
    g = group_coincident([a, b, a])
    assert sorted(map(sorted, g.classes)) == [[0, 2], [1]]


def test_images_equal_rejects_infinite_coordinates():
    F = PointField(AlgNum.rational(0), 0, UPoly([0, 1]))
    with pytest.raises(InfiniteCoordinate):
        images_equal([None], [_const_coord(F, 1)])


@pytest.fixture(scope="module")
def example():
    return run_topology(load_corpus("plane_04"), certify=True)


def _si_points(topo):
    out = []
    for key, pl in topo.places.items():
        if pl.gpoint is not None and "SelfIntCandidate" in pl.roles:
            out.append((float(pl.gpoint.t), key))
    return [k for _, k in sorted(out)]


def test_worked_example_pairings(example):
    q13, q14, q15, q16 = _si_points(example)
    P = example.places
    assert images_equal(P[q13].coords, P[q16].coords)
    assert images_equal(P[q14].coords, P[q15].coords)
    assert not images_equal(P[q13].coords, P[q14].coords)
    assert not images_equal(P[q15].coords, P[q16].coords)


def test_verdicts_symmetric_and_classes_transitive(example):
    P = example.places
    finite = [k for k, pl in P.items() if pl.finite]
    for v in example.grouping.verdicts:
        a, b = P[finite[v.i]].coords, P[finite[v.j]].coords
        assert images_equal(b, a) == v.equal
    for cls in example.classes:
        for i in range(len(cls)):
            for j in range(i + 1, len(cls)):
                assert images_equal(P[cls[i]].coords, P[cls[j]].coords)


def test_uncertified_grouping_agrees_on_example(example):
    loose = run_topology(load_corpus("plane_04"), certify=False)
    assert sorted(map(sorted, loose.classes)) == sorted(map(sorted, example.classes))
    assert loose.graph.metadata["certification_mode"] == "threshold"


def test_place_image_matches_float_evaluation(example):
    curve, hmap = load_corpus("plane_04").build()
    fm = FloatMap(hmap, curve)
    for key in _si_points(example):
        pl = example.places[key]
        t, _ = pl.gpoint.approx(curve.p)
        img = fm(t, pl.gpoint.branch.sign)
        assert all(abs(c.approx() - x) < 1e-6 for c, x in zip(pl.coords, img))


@pytest.mark.parametrize("name", corpus_names())
def test_threshold_grouping_agrees_with_certified(name, corpus):
    run = corpus(name)
    assert run.error is None, run.error
    loose = run_topology(run.spec, certify=False, polylines=False)
    assert sorted(map(sorted, loose.classes)) == sorted(map(sorted, run.topo.classes))
