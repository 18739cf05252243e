import random
from fractions import Fraction

import pytest
from graphcheck import (bfs_components_and_cycles, edge_conflicts, quotient_components_and_cycles,
                        random_instance)

from hypertop.curvedef import HMap, NotBirational, canonical_component, new_curve
from hypertop.curvespec import load_corpus
from hypertop.exactpoly import UPoly
from hypertop.graph import find_conflicts, load_graph, segments_conflict
from hypertop.planar_topo import (LOCAL_RAM, SELF_INT, compute_topology, critical_points_G,
                                  mid_param, topology2d)
from hypertop.realalg import AlgNum

T = UPoly([0, 1])
ONE = UPoly([1])
ZERO = UPoly()


@pytest.fixture(scope="module")
def example():
    curve, hmap = load_corpus("plane_04").build()
    return curve, hmap, compute_topology(hmap, curve)


def test_critical_points_are_exact(example):
    curve, _, _ = example
    pts = critical_points_G(curve)
    assert [q.t.value for q in pts] == [-5, -1, 2, 5]
    assert all(q.t.is_rational for q in pts)


def test_event_kinds_and_counts(example):
    _, _, topo = example
    kinds = [ev.kinds for ev in topo.events]
    assert sum(LOCAL_RAM in k for k in kinds) == 8
    assert sum(SELF_INT in k for k in kinds) == 4
    md = topo.graph.metadata
    assert md["flags"]["base_points"] is False
    assert md["flags"]["asymptotes"] is False
    assert not any(e["real"] for e in md["infinity"])


def test_two_self_intersection_vertices(example):
    _, _, topo = example
    si = [v for v in topo.graph.vertices if "self_intersection" in v.roles]
    assert len(si) == 2
    assert all(len(v.provenance) == 2 for v in si)
    assert all(topo.graph.degree(v.id) == 4 for v in si)


def test_graph_structure_invariants(example):
    _, _, topo = example
    g = topo.graph
    n = len(g.vertices)
    assert [v.id for v in g.vertices] == list(range(n))
    for v in g.vertices:
        assert v.provenance, v
    for e in g.edges:
        assert 0 <= e.a < n and 0 <= e.b < n and e.a != e.b
        assert 0 <= e.source_edge < len(topo.gg_edges)
        assert e.branch in ("Plus", "Minus")
    # the edges over one edge of G form a path
    by_src = {}
    for e in g.edges:
        by_src.setdefault(e.source_edge, []).append(e)
    for chain in by_src.values():
        for e1, e2 in zip(chain, chain[1:]):
            assert e1.b == e2.a


def test_euler_numbers_two_routes(example):
    _, _, topo = example
    g = topo.graph
    direct = bfs_components_and_cycles(len(g.vertices), [(e.a, e.b) for e in g.edges])
    assert direct == g.components_and_cycles()
    assert direct == quotient_components_and_cycles(topo)
    assert direct == (1, 3)


def test_no_edge_crossings(example):
    _, _, topo = example
    assert edge_conflicts(topo.graph) == []


def test_events_invariant_under_scaling(example):
    curve, hmap, topo = example
    scaled = HMap([canonical_component(c.a1 * k, c.a2 * k, c.b1, c.b2)
                   for c, k in zip(hmap.components, (Fraction(3), Fraction(-2, 7)))])
    other = compute_topology(scaled, curve)

    def sig(t):
        return sorted((round(ev.location.approx(curve.p)[0], 9), ev.location.branch.sign,
                       tuple(sorted(ev.kinds))) for ev in t.events)

    assert sig(other) == sig(topo)


def test_json_round_trip_of_graph(example):
    _, _, topo = example
    g = topo.graph
    data = g.to_json()
    back = load_graph(data)
    assert len(back.vertices) == len(g.vertices)
    assert [(e.a, e.b) for e in back.edges] == [(e.a, e.b) for e in g.edges]
    for v, w in zip(g.vertices, back.vertices):
        assert all(abs(float(x) - float(y)) < 1e-9 * (1 + abs(float(x))) for x, y in zip(v.rep, w.rep))


def test_not_birational_map_raises():
    curve = new_curve([2, 0, -4])
    t2 = UPoly([0, 0, 1])
    hmap = HMap([canonical_component(t2, ZERO, ONE, ZERO),
                 canonical_component(ZERO, t2 + UPoly([3]), ONE, ZERO)])
    with pytest.raises(NotBirational):
        topology2d(hmap, curve)


def test_unbounded_branches_get_markers():
    # the parabola-like image of s^2 = t: (t, s) itself has two ends at infinity
    curve = new_curve([0, 1])
    hmap = HMap([canonical_component(T, ZERO, ONE, ZERO), canonical_component(ZERO, ONE, ONE, ZERO)])
    topo = compute_topology(hmap, curve)
    g = topo.graph
    kinds = [v.kind for v in g.vertices]
    assert kinds.count("infinity") == 2
    assert g.components_and_cycles() == (1, 0)
    assert topo.graph.metadata["flags"]["self_intersection"] is False


def test_segment_predicates():
    P = lambda x, y: (Fraction(x), Fraction(y))  # noqa: E731
    assert segments_conflict(P(0, 0), P(2, 2), P(0, 2), P(2, 0), 0)
    assert not segments_conflict(P(0, 0), P(1, 1), P(2, 2), P(3, 0), 0)
    # touching at an interior point counts
    assert segments_conflict(P(0, 0), P(2, 0), P(1, 0), P(1, 1), 0)
    # shared endpoint, overlapping collinear
    assert segments_conflict(P(0, 0), P(2, 0), P(0, 0), P(1, 0), 1)
    assert not segments_conflict(P(0, 0), P(2, 0), P(0, 0), P(-1, 0), 1)
    pts = {0: P(0, 0), 1: P(2, 2), 2: P(0, 2), 3: P(2, 0), 4: P(5, 5)}
    assert find_conflicts(pts, [(0, 1), (2, 3), (1, 4)]) == {0, 1}


def test_mid_param_between_close_roots():
    f = UPoly([-2, 0, 1])
    r = [a for a in (AlgNum(f, 1, 2, True),)][0]
    m = mid_param(r, Fraction(1415, 1000))
    assert Fraction(14142, 10000) < m < Fraction(1415, 1000)


@pytest.mark.parametrize("seed", range(4))
def test_random_instances_graph_invariants(seed):
    rng = random.Random(1000 + seed)
    curve, hmap = random_instance(rng, max_p=4, max_map=2)
    topo = compute_topology(hmap, curve)
    g = topo.graph
    assert edge_conflicts(g) == []
    direct = bfs_components_and_cycles(len(g.vertices), [(e.a, e.b) for e in g.edges])
    assert direct == quotient_components_and_cycles(topo)
    si = [v for v in g.vertices if "self_intersection" in v.roles]
    assert all(len({str(p) for p in v.provenance}) >= 2 for v in si)
