import random
from fractions import Fraction as F

import pytest

import helpers
from tropws import catalog
from tropws.divisor import Divisor, GapSequence, canonical_divisor
from tropws.graph import build_graph
from tropws.rank import gap_sequence
from tropws.region import Region
from tropws.weierstrass import (
    SweepError,
    chip_locus,
    format_edge_map,
    gap_jump_check,
    maximal_loci,
    mu,
    semigroup_check,
    simplest_between,
    sweep,
    sweep_edge,
    verify_totals,
    wl,
    wl_ge,
)


@pytest.fixture(scope="module")
def B3():
    G = catalog.dipole(3).graph
    K = canonical_divisor(G)
    return G, K, sweep(G, K)


@pytest.fixture(scope="module")
def B4():
    G = catalog.dipole(4).graph
    K = canonical_divisor(G)
    return G, K, sweep(G, K)


def test_trees_have_no_weierstrass_points():
    T = build_graph(["a", "b", "c", "d"], [("a", "b", 1), ("b", "c", "1/2"), ("b", "d", 2)])
    for k in (1, 3):
        D = Divisor.point(T.vertex_point("c"), k)
        gm = sweep(T, D)
        assert gm.r == k
        assert wl(T, D, gm).is_empty()
        assert gm.achieved() == {GapSequence(range(1, k + 2))}


def test_circle_locus_is_torsion():
    # on a circle of length 2, 3(p) ~ 3(a) iff p is 2k/3 away from a
    C = build_graph(["a", "b"], [("a", "b", 1), ("a", "b", 1)])
    D = Divisor.point(C.vertex_point("a"), 3)
    gm = sweep(C, D)
    assert wl(C, D, gm).describe() == "a, e0:{2/3}, e1:{2/3}"
    loci = maximal_loci(C, D, gm)
    assert {tuple(L.gap) for L in loci} == {(1, 2, 4)}
    assert sum(L.weight for L in loci) == 3  # rg - r + d with g = 1
    assert verify_totals(C, D, gm).ok


def test_dipole3_loci(B3):
    G, K, gm = B3
    W = wl(G, K, gm)
    assert W.describe() == "e0:[1/3,2/3], e1:[1/3,2/3], e2:[1/3,2/3], e3:[1/3,2/3]"
    assert wl_ge(G, K, (1, 2, 4), gm) == W
    assert wl_ge(G, K, (1, 3, 5), gm).describe() == "e0:{1/2}, e1:{1/2}, e2:{1/2}, e3:{1/2}"
    # (1,3,5) dominates (1,2,5)
    assert wl_ge(G, K, (1, 2, 5), gm) == wl_ge(G, K, (1, 3, 5), gm)
    loci = maximal_loci(G, K, gm, with_mu=True)
    assert [(L.region.describe(), tuple(L.gap), L.weight) for L in loci] == [
        (f"e{j}:{{1/2}}", (1, 3, 5), 3) for j in range(4)
    ]
    assert all(L.isolated for L in loci)
    with pytest.raises(ValueError):
        wl_ge(G, K, (1, 2), gm)


def test_dipole4_middle_locus(B4):
    G, K, gm = B4
    R = wl_ge(G, K, (1, 2, 4, 6), gm)
    assert R.describe() == ", ".join(f"e{j}:[2/5,3/5]" for j in range(5))
    assert sum(L.weight for L in maximal_loci(G, K, gm)) == 5 * 6


def test_mu_on_dipole3(B3):
    G, K, gm = B3
    third = Region(G, {0: [(F(1, 3), F(2, 3))]})
    assert mu(G, K, third) == 2
    whole = Region.whole(G)
    # chips 4, genus 3, one component, no boundary: 4 + 2*2
    assert mu(G, K, whole) == 8
    mid = Region.from_points(G, [G.point(0, F(1, 2))])
    assert mu(G, K, mid) == 2 <= gm.value_at(G.point(0, F(1, 2))).weight
    with pytest.raises(ValueError):
        mu(G, K, Region(G))
    with pytest.raises(ValueError):
        mu(G, K, third, variant="other")
    with pytest.raises(ValueError):
        mu(G, K, third.union(Region(G, {1: [(F(1, 3), F(2, 3))]})), variant="agr")


def test_mu_is_additive_over_components(B3):
    G, K, gm = B3
    comps = wl(G, K, gm).components()
    assert mu(G, K, wl(G, K, gm)) == sum(mu(G, K, A) for A in comps) == 8


def test_verify_totals_reports(B3):
    G, K, gm = B3
    rep = verify_totals(G, K, gm)
    assert rep.ok and rep.data["mu"] == [2, 2, 2, 2] and rep.data["expected"] == 8
    assert rep.data["finite"] is False
    assert any("Σ μ = 8" in line for line in rep.lines)
    k4 = catalog.k4().graph
    rep = verify_totals(k4, canonical_divisor(k4))
    assert rep.ok and rep.data["finite"] and rep.data["total_weight"] == 8


def test_semigroup_check():
    assert semigroup_check((1, 2, 3))
    assert semigroup_check((1, 2, 5), 3)
    assert semigroup_check((1, 3, 5, 7))
    assert not semigroup_check((1, 2, 5, 6))
    assert not semigroup_check((1, 2, 5, 7))
    with pytest.raises(ValueError):
        semigroup_check((1, 2), 3)


def test_gap_jumps_and_semicontinuity_on_catalog():
    for fam in (catalog.dipole(3), catalog.k4(), catalog.theta_circle("1/3"), catalog.chain_of_circles(3)):
        G = fam.graph
        gm = sweep(G, canonical_divisor(G))
        assert gm.check_semicontinuity()
        assert all(gap_jump_check(m) for m in gm.edges)
        assert all(m.check_semicontinuity() for m in gm.edges)


def test_sweep_matches_pointwise_evaluation():
    rng = random.Random(51)
    fams = [
        catalog.dipole(3, [1, "1/2", "3/2", 2]),
        catalog.k4(["1/2", 1, 1, 2, 1, "3/2"]),
        catalog.chain_of_circles(3, [1, 1, 1, 2, 1, 1]),
        catalog.theta_circle("v"),
    ]
    for fam in fams:
        G = fam.graph
        K = canonical_divisor(G)
        gm = sweep(G, K)
        for m in gm.edges:
            # every breakpoint and a point inside every cell, computed directly
            for a, b, n in m.pieces():
                t = (a + b) / 2
                assert gap_sequence(G, K, G.point(m.edge, t)) == n
        for _ in range(10):
            p = helpers.random_point(rng, G, max_den=7)
            assert gap_sequence(G, K, p) == gm.value_at(p)


def test_sweep_of_a_noncanonical_divisor():
    G = catalog.dipole(3).graph
    D = Divisor.point(G.vertex_point("v"), 5)
    gm = sweep(G, D)
    assert gm.r == 2
    rep = verify_totals(G, D, gm)
    assert rep.ok and sum(rep.data["mu"]) == 2 * 3 - 2 + 5
    assert not rep.data["finite"]


@pytest.mark.parametrize(
    "fam", [catalog.dipole(3), catalog.dipole(4), catalog.theta_circle("1/3")], ids=lambda f: f.name
)
def test_bisect_agrees_with_exact(fam):
    G = fam.graph
    K = canonical_divisor(G)
    for j in range(min(3, len(G.edges))):
        exact = sweep_edge(G, K, j)
        assert sweep_edge(G, K, j, method="bisect") == exact
        assert sweep_edge(G, K, j, method="bisect", qmax=2 * 120 * 5, grid=12) == exact


def test_bisect_needs_enough_resolution():
    G = catalog.dipole(4).graph
    with pytest.raises(SweepError):
        sweep_edge(G, canonical_divisor(G), 0, method="bisect", qmax=2, grid=4)
    with pytest.raises(ValueError):
        sweep_edge(G, canonical_divisor(G), 0, method="nope")


def test_simplest_between():
    assert simplest_between(F(1, 3), F(1, 2)) == F(1, 2)
    assert simplest_between(F(3, 10), F(7, 20)) == F(1, 3)
    assert simplest_between(F(2, 1), F(5, 2)) == 2
    assert simplest_between(F(7, 20), F(3, 10)) == F(1, 3)


def test_chip_locus_equals_top_gap_region():
    for fam in (catalog.dipole(3), catalog.k4(), catalog.wheel(4), catalog.k4_circle()):
        G = fam.graph
        g = G.genus
        K = canonical_divisor(G)
        gm = sweep(G, K)
        top = gm.region(lambda n: n[-1] == 2 * g - 1)
        assert chip_locus(G, K, 2 * g - 2) == top, fam.name


def test_format_edge_map(B3):
    G, K, gm = B3
    lines = format_edge_map(G, gm.edges[0])
    assert lines[0] == "e0 0 (1,2,3) wt=0"
    assert "e0 1/2 (1,3,5) wt=3" in lines
    assert lines[1] == "e0 (0,1/3) (1,2,3) wt=0"


@pytest.mark.parametrize("g", [2, 3])
def test_large_degree_isolated_vertex_has_weight_g(g):
    G = catalog.dipole(g).graph
    v = G.vertex_point("v")
    for d in (2 * g - 1, 2 * g):
        D = Divisor.point(v, d)
        gm = sweep(G, D)
        comps = wl(G, D, gm).components()
        assert Region.from_points(G, [v]) in comps
        assert gm.value_at(v).weight == g
        assert verify_totals(G, D, gm).ok
