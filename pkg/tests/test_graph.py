import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

import helpers
from tropws import catalog
from tropws.graph import Point, as_rational, build_graph, cycle_rank, fmt_rational, refine
from tropws.region import Region


def test_rationals_parse_and_print():
    assert as_rational("3/2") == F(3, 2)
    assert as_rational(2) == 2
    assert fmt_rational(F(4, 2)) == "2"
    assert fmt_rational(F(-1, 3)) == "-1/3"
    with pytest.raises((ValueError, TypeError)):
        as_rational(0.5)


def test_build_graph_validation():
    with pytest.raises(ValueError, match="not connected"):
        build_graph(["a", "b", "c", "d"], [("a", "b", 1), ("c", "d", 1)])
    with pytest.raises(ValueError, match="nonpositive"):
        build_graph(["a", "b"], [("a", "b", 0)])
    with pytest.raises(ValueError, match="not a vertex"):
        build_graph(["a"], [("a", "z", 1)])
    with pytest.raises(ValueError, match="duplicate"):
        build_graph(["a", "a"], [("a", "a", 1)])


def test_loops_are_split():
    G = build_graph(["o"], [("o", "o", 2), ("o", "o", "1/2")])
    assert len(G.vertices) == 3 and len(G.edges) == 4
    assert G.genus == 2
    assert G.total_length() == F(5, 2)
    assert sorted(e.length for e in G.edges) == [F(1, 4), F(1, 4), 1, 1]


def test_points_on_edges():
    G = catalog.dipole(3).graph
    assert G.point(0, 0) == Point(vertex=G.edges[0].u)
    assert G.point("e0", 1) == Point(vertex=G.edges[0].v)
    p = G.parse_point("e2:1/3")
    assert p == Point(edge=2, t=F(1, 3)) and G.fmt_point(p) == "e2:1/3"
    with pytest.raises(ValueError):
        G.point(0, 2)
    with pytest.raises(ValueError):
        G.parse_point("e9:1/2")
    assert G.valence(p) == 2 and G.valence(G.vertex_point("v")) == 4
    assert len(G.directions(p)) == 2


def test_bridges():
    fam = catalog.circle_dipole_bridge()
    G = fam.graph
    bridges = [j for j in range(len(G.edges)) if G.is_bridge(j)]
    assert bridges
    assert not any(catalog.dipole(3).graph.is_bridge(j) for j in range(4))
    H = catalog.chain_of_circles(3).graph
    assert not any(H.is_bridge(j) for j in range(len(H.edges)))


@pytest.mark.parametrize("G", helpers.catalog_graphs(), ids=repr)
def test_genus_matches_cycle_rank(G):
    assert G.genus == cycle_rank(G)


def test_refine_preserves_metric():
    G = catalog.k4().graph
    p, q = G.point(0, F(1, 3)), G.point(0, F(2, 3))
    H, tr = refine(G, [p, q])
    assert H.genus == G.genus and H.total_length() == G.total_length()
    assert tr(p).is_vertex and tr(q).is_vertex
    x = tr(G.point(0, F(1, 2)))
    assert not x.is_vertex and x.t == F(1, 6)


# ---------------------------------------------------------------- regions


def test_region_normal_form():
    G = catalog.dipole(3).graph
    R = Region(G, {0: [(0, F(1, 4)), (F(1, 8), F(1, 2)), (1, 1)]})
    assert R.intervals == {0: ((0, F(1, 2)),)}
    assert R.vertices == {G.edges[0].u, G.edges[0].v}
    with pytest.raises(ValueError):
        Region(G, {0: [(0, 2)]})


def test_region_components_and_genus():
    G = catalog.dipole(3).graph
    W = Region.whole(G)
    assert W.component_count == 1 and W.genus == 3
    two = Region(G, {0: [(0, 1)], 1: [(0, 1)]})
    assert two.component_count == 1 and two.genus == 1
    bits = Region(G, {0: [(F(1, 3), F(1, 2))], 1: [(F(1, 2), F(1, 2))]}, [0])
    assert bits.component_count == 3 and bits.genus == 0
    assert [c.describe() for c in bits.components()] == ["e0:[1/3,1/2]", "e1:{1/2}", "v"]


def test_region_boundary_directions():
    G = catalog.dipole(3).graph
    R = Region(G, {0: [(0, F(1, 2))]})
    b = dict((G.fmt_point(p), len(d)) for p, d in R.boundary())
    assert b == {"v": 3, "e0:1/2": 1}
    assert R.outdeg(G.vertex_point("v")) == 3
    single = Region.from_points(G, [G.point(1, F(1, 3))])
    assert single.outdeg(G.point(1, F(1, 3))) == 2


def _random_region(rng, G):
    ivs = {}
    for j, e in enumerate(G.edges):
        for _ in range(rng.randint(0, 2)):
            a = e.length * F(rng.randint(0, 8), 8)
            b = min(e.length, a + e.length * F(rng.randint(0, 4), 8))
            ivs.setdefault(j, []).append((a, b))
    verts = [v for v in range(len(G.vertices)) if rng.random() < 0.3]
    return Region(G, ivs, verts)


def test_region_membership_probes():
    rng = random.Random(3)
    G = catalog.k4(["1/2", 1, 1, 2, 1, "3/2"]).graph
    for _ in range(20):
        R, S = _random_region(rng, G), _random_region(rng, G)
        U, I = R.union(S), R.intersection(S)
        comps = R.components()
        for _ in range(50):
            p = helpers.random_point(rng, G, max_den=16)
            assert U.contains(p) == (R.contains(p) or S.contains(p))
            assert I.contains(p) == (R.contains(p) and S.contains(p))
            assert R.contains(p) == any(c.contains(p) for c in comps)
        assert sum(c.component_count for c in comps) == R.component_count


@given(st.integers(0, 8), st.integers(0, 8), st.integers(1, 7))
def test_interval_contains_its_midpoint(a, w, j):
    G = catalog.dipole(3).graph
    lo, hi = F(a, 16), F(min(16, a + w), 16)
    R = Region(G, {j % 4: [(lo, hi)]})
    mid = (lo + hi) / 2
    if 0 < mid < 1:
        assert R.contains(G.point(j % 4, mid))
    if hi < 1:
        assert not R.contains(G.point(j % 4, (hi + 1) / 2))
