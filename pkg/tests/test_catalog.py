import random
from math import comb

import pytest

from tropws import catalog
from tropws.divisor import Divisor, canonical_divisor
from tropws.rank import gap_sequence, rank
from tropws.weierstrass import semigroup_check


@pytest.mark.parametrize(
    "name,genus,edges",
    [
        ("dipole", 3, 4),
        ("wheel", 4, 8),
        ("chain", 3, 6),
        ("bouquet", 3, 6),
    ],
)
def test_families_with_a_genus(name, genus, edges):
    fam = catalog.build_family(name, genus)
    assert fam.genus == genus and len(fam.graph.edges) == edges


@pytest.mark.parametrize("name", ["k4", "theta-circle", "circle-chords", "two-lens", "k4-circle", "circle-dipole"])
def test_fixed_genus_families(name):
    fam = catalog.build_family(name)
    assert fam.genus in (3, 4)


def test_family_errors():
    with pytest.raises(ValueError, match="unknown family"):
        catalog.build_family("petersen")
    with pytest.raises(ValueError, match="edge lengths"):
        catalog.dipole(3, [1, 1])
    with pytest.raises(ValueError):
        catalog.dipole(0)


def test_hyperelliptic_metadata():
    for fam in (catalog.dipole(3), catalog.chain_of_circles(3), catalog.bouquet(3), catalog.two_lens((1, 1)),
                catalog.theta_circle("1/2")):  # fmt: skip
        assert fam.hyperelliptic, fam.name
        assert rank(fam.graph, Divisor.point(fam.v0, 2)) == 1
    for fam in (catalog.k4(), catalog.circle_chords(), catalog.two_lens((1, 2)), catalog.wheel(4)):
        assert not fam.hyperelliptic
    # non-antipodal chain: the middle arcs differ
    assert not catalog.chain_of_circles(3, [1, 1, 1, 2, 1, 1]).hyperelliptic


def test_marked_points():
    fam = catalog.circle_dipole_bridge()
    for name in ("p", "q"):
        assert fam.point(name) is not None
    assert fam.v0 == fam.point("q")


def test_census_rows_match_declared_totals():
    fams = catalog.census_without_cut_vertices() + catalog.census_with_cut_vertices()
    assert len(fams) == 11
    for fam in fams:
        row = catalog.census_row(fam)
        assert row.isolated, fam.name
        assert fam.expected_total is not None
        assert row.total == fam.expected_total, (fam.name, fam.params, row.total)


def test_genus2_census():
    # three maximal points with gap (1,3), weight 1 each; g^2 - 1 = 3 for a finite locus
    for fam in (catalog.dipole(2), catalog.chain_of_circles(2)):
        row = catalog.census_row(fam)
        assert [tuple(L.gap) for L in row.loci] == [(1, 3)] * 3
        assert row.total == fam.expected_total == 3


def test_sequence_sets():
    for g in (2, 3, 4):
        assert len(catalog.all_sequences(g)) == comb(2 * g - 1, g)
    assert {tuple(n) for n in catalog.semigroup_sequences(2)} == {(1, 2), (1, 3)}
    assert {tuple(n) for n in catalog.semigroup_sequences(3)} == {(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 5)}
    N4 = {tuple(n) for n in catalog.semigroup_sequences(4)}
    assert {tuple(n) for n in catalog.ACHIEVABLE[4]} - N4 == {(1, 2, 4, 6), (1, 2, 5, 6)}
    assert not catalog.EXCLUDED_4 & {tuple(n) for n in catalog.ACHIEVABLE[4]}
    for n in catalog.EXCLUDED_4:
        assert not semigroup_check(n, 4)


def test_classify_low_genus():
    assert {tuple(n) for n in catalog.classify(2)} == {(1, 2), (1, 3)}
    assert {tuple(n) for n in catalog.classify(3)} == {(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 5)}
    with pytest.raises(ValueError):
        catalog.classify(3, [catalog.dipole(2)])
    with pytest.raises(ValueError):
        catalog.witness_set(5)


@pytest.mark.parametrize("g", [4, 5])
def test_non_semigroup_point_on_dipoles(g):
    fam, p = catalog.remark_point(g)
    n = gap_sequence(fam.graph, canonical_divisor(fam.graph), p)
    assert tuple(n) == (1, 2, *range(4, 2 * g - 1, 2))
    assert not semigroup_check(n, g)


def test_random_genus4_instances():
    rng = random.Random(61)
    for _ in range(20):
        fam = catalog.random_genus4(rng)
        assert fam.genus == 4
        # circle-dipole halves one sampled edge at q', so check the sampled values
        assert all(1 <= x <= 2 for x in fam.params["lengths"])


def test_top_gap_filter_matches_full_sweep():
    rng = random.Random(62)
    fams = [catalog.random_genus4(rng, max_den=3) for _ in range(6)]
    fams = [f for f in fams if f.name in ("dipole", "chain", "wheel")][:3] + catalog.witness_set(4)[:2]
    for fam in fams:
        g = fam.genus
        full = {n for n in catalog.canonical_sequences(fam) if n[-1] == 2 * g - 1}
        assert catalog.top_gap_sequences(fam) == full, (fam.name, fam.params)


def test_exclusion_probe_small():
    rep = catalog.exclusion_probe(samples=10, seed=5)
    assert rep.instances == 10 and rep.ok
    full = catalog.exclusion_probe(families=[catalog.dipole(4)], full=True)
    assert full.ok
