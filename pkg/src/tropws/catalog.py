"""Named graph families, census data and the classification driver.

Every builder returns a :class:`Family`: the graph plus the facts we
rely on elsewhere. A hyperelliptic declaration must come with a base
point v0, and ``rank(2 v0) = 1`` is checked when the family is built.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Sequence

from .divisor import Divisor, GapSequence, canonical_divisor
from .graph import MetricGraph, Point, as_rational, build_graph
from .rank import gap_sequence, rank
from .weierstrass import chip_locus, maximal_loci, semigroup_check, sweep, sweep_edge

ONE = Fraction(1)


@dataclass
class Family:
    name: str
    params: dict
    graph: MetricGraph
    hyperelliptic: bool = False
    v0: Point | None = None
    marked: dict = field(default_factory=dict)
    golden: str | None = None  # fixture name under tropws/data
    expected_total: int | None = None  # sum of weights over maximal loci of K

    @property
    def genus(self) -> int:
        return self.graph.genus

    def point(self, name: str) -> Point:
        if name in self.marked:
            return self.marked[name]
        return self.graph.parse_point(name)


def _lengths(given, n: int, default=ONE) -> list[Fraction]:
    if given is None:
        return [default] * n
    out = [as_rational(x) for x in given]
    if len(out) != n:
        raise ValueError(f"expected {n} edge lengths, got {len(out)}")
    return out


def _finish(fam: Family, genus: int | None = None) -> Family:
    if genus is not None and fam.graph.genus != genus:
        raise AssertionError(f"{fam.name}: built genus {fam.graph.genus}, declared {genus}")
    if fam.hyperelliptic:
        if fam.v0 is None:
            raise ValueError(f"{fam.name}: hyperelliptic family without v0")
        if rank(fam.graph, Divisor.point(fam.v0, 2)) != 1:
            raise ValueError(f"{fam.name}: declared v0 does not satisfy rank(2 v0) = 1")
    return fam


# ---------------------------------------------------------------- builders


def dipole(genus: int, lengths=None) -> Family:
    """Two vertices joined by genus+1 edges."""
    if genus < 1:
        raise ValueError("dipole needs genus >= 1")
    ls = _lengths(lengths, genus + 1)
    G = build_graph(["v", "v'"], [("v", "v'", x) for x in ls])
    unit = all(x == 1 for x in ls)
    golden = f"dipole{genus}" if unit and genus in (3, 4) else None
    fam = Family("dipole", {"genus": genus, "lengths": ls}, G, genus >= 2, None, golden=golden)
    if genus >= 2:
        fam.v0 = G.point(0, ls[0] / 2)
        fam.marked["v0"] = fam.v0
    if unit and genus == 3:
        fam.expected_total = 12
    if unit and genus == 2:
        fam.expected_total = 3
    return _finish(fam, genus)


def wheel(genus: int, lengths=None) -> Family:
    """Center ``w`` with spokes e0..e{g-1} to a rim cycle v1..vg (rim edges after)."""
    if genus < 3:
        raise ValueError("wheel needs genus >= 3")
    ls = _lengths(lengths, 2 * genus)
    rim = [f"v{i}" for i in range(1, genus + 1)]
    edges = [("w", v, ls[i]) for i, v in enumerate(rim)]
    edges += [(rim[i], rim[(i + 1) % genus], ls[genus + i]) for i in range(genus)]
    G = build_graph(["w", *rim], edges)
    fam = Family("wheel", {"genus": genus, "lengths": ls}, G)
    fam.marked["w"] = G.vertex_point("w")
    if genus == 3 and all(x == 1 for x in ls):
        fam.expected_total = 8
    return _finish(fam, genus)


def k4(lengths=None) -> Family:
    fam = wheel(3, lengths)
    fam.name = "k4"
    return fam


def chain_of_circles(genus: int, lengths=None) -> Family:
    """Circles glued in a row at single points.

    Circle i carries two arcs (lengths[2i], lengths[2i+1]) between its left
    point and its right point. Inner points are the gluing vertices
    j1..j{g-1}; the outer ends ``a`` and ``b`` are marked 2-valent vertices
    opposite the first and last gluing point. With equal arcs on every
    middle circle the gluing points are antipodal.
    """
    if genus < 1:
        raise ValueError("chain needs at least one circle")
    ls = _lengths(lengths, 2 * genus)
    stops = ["a", *[f"j{i}" for i in range(1, genus)], "b"]
    edges = []
    for i in range(genus):
        edges.append((stops[i], stops[i + 1], ls[2 * i]))
        edges.append((stops[i + 1], stops[i], ls[2 * i + 1]))
    G = build_graph(stops, edges)
    antipodal = all(ls[2 * i] == ls[2 * i + 1] for i in range(1, genus - 1))
    hyper = genus >= 2 and antipodal
    fam = Family("chain", {"genus": genus, "lengths": ls}, G, hyper)
    if genus >= 2:
        fam.marked["j1"] = G.vertex_point("j1")
        if hyper:
            fam.v0 = fam.marked["j1"]
    if genus == 3 and all(x == 1 for x in ls):
        fam.expected_total = 24
    if genus == 3 and not antipodal:
        fam.expected_total = 12
    if genus == 2 and all(x == 1 for x in ls):
        fam.expected_total = 3
    return _finish(fam, genus)


def theta_circle(at="1/3", lengths=None) -> Family:
    """Genus-2 dipole with a circle hung at one point.

    ``at`` is the offset of the attaching point ``w`` on the third edge, or
    ``"v"`` to hang the circle at the vertex. Lengths are (e0, e1, e2,
    arc, arc); the circle's far point is ``c``.
    """
    ls = _lengths(lengths, 5)
    if at == "v":
        edges = [("v", "v'", ls[0]), ("v", "v'", ls[1]), ("v", "v'", ls[2]), ("v", "c", ls[3]), ("c", "v", ls[4])]
        G = build_graph(["v", "v'", "c"], edges)
        fam = Family("theta-circle", {"at": "v", "lengths": ls}, G)
        if all(x == 1 for x in ls):
            fam.expected_total = 10
        return _finish(fam, 3)
    a = as_rational(at)
    if not 0 < a < ls[2]:
        raise ValueError("attaching offset must lie inside the edge")
    edges = [
        ("v", "v'", ls[0]),
        ("v", "v'", ls[1]),
        ("v", "w", a),
        ("w", "v'", ls[2] - a),
        ("w", "c", ls[3]),
        ("c", "w", ls[4]),
    ]
    G = build_graph(["v", "v'", "w", "c"], edges)
    mid = 2 * a == ls[2]
    fam = Family("theta-circle", {"at": a, "lengths": ls}, G, mid)
    fam.marked["w"] = G.vertex_point("w")
    if mid:
        fam.v0 = fam.marked["w"]
    if all(x == 1 for x in ls):
        fam.expected_total = 16 if mid else 8
    return _finish(fam, 3)


def bouquet(genus: int = 3, lengths=None) -> Family:
    """Circles all glued at one point ``o``."""
    ls = _lengths(lengths, genus)
    G = build_graph(["o"], [("o", "o", x) for x in ls])
    fam = Family("bouquet", {"genus": genus, "lengths": ls}, G, genus >= 2)
    fam.marked["o"] = G.vertex_point("o")
    if genus >= 2:
        fam.v0 = fam.marked["o"]
    if genus == 3 and all(x == 1 for x in ls):
        fam.expected_total = 24
    return _finish(fam, genus)


def circle_chords(lengths=None) -> Family:
    """Circle through b, l, r with two chords from b (genus 3, three vertices)."""
    ls = _lengths(lengths, 5)
    edges = [("b", "l", ls[0]), ("l", "r", ls[1]), ("r", "b", ls[2]), ("b", "l", ls[3]), ("b", "r", ls[4])]
    fam = Family("circle-chords", {"lengths": ls}, build_graph(["b", "l", "r"], edges))
    fam.expected_total = 8
    return _finish(fam, 3)


def two_lens(verticals=(1, 2), lengths=None) -> Family:
    """Two lenses (a-b on top, c-d below) joined by verticals a-c and b-d.

    Equal verticals give a hyperelliptic graph.
    """
    ls = _lengths(lengths, 4)
    h1, h2 = (as_rational(x) for x in verticals)
    edges = [("a", "b", ls[0]), ("a", "b", ls[1]), ("c", "d", ls[2]), ("c", "d", ls[3]), ("a", "c", h1), ("b", "d", h2)]
    G = build_graph(["a", "b", "c", "d"], edges)
    hyper = h1 == h2
    fam = Family("two-lens", {"verticals": (h1, h2), "lengths": ls}, G, hyper)
    if hyper:
        fam.v0 = G.point(0, ls[0] / 2)
        fam.marked["v0"] = fam.v0
    fam.expected_total = 12 if hyper else 8
    return _finish(fam, 3)


def k4_circle(lengths=None) -> Family:
    """Complete graph on v1..v4, a bridge v4-v5, and a circle through v5 and v6."""
    ls = _lengths(lengths, 9)
    pairs = [("v1", "v2"), ("v2", "v4"), ("v4", "v1"), ("v1", "v3"), ("v3", "v2"), ("v4", "v3"), ("v4", "v5"), ("v5", "v6"), ("v6", "v5")]
    G = build_graph([f"v{i}" for i in range(1, 7)], [(u, v, x) for (u, v), x in zip(pairs, ls)])
    fam = Family("k4-circle", {"lengths": ls}, G)
    fam.marked["p"] = G.vertex_point("v5")
    return _finish(fam, 4)


def circle_dipole_bridge(lengths=None) -> Family:
    """A four-arc circle p-q-r-s bridged at q to the midpoint q' of a genus-3 dipole edge."""
    ls = _lengths(lengths, 9)
    edges = [
        ("p", "q", ls[0]),
        ("q", "r", ls[1]),
        ("r", "s", ls[2]),
        ("s", "p", ls[3]),
        ("q", "q'", ls[4]),
        ("u", "q'", ls[5] / 2),
        ("q'", "u'", ls[5] / 2),
        ("u", "u'", ls[6]),
        ("u", "u'", ls[7]),
        ("u", "u'", ls[8]),
    ]
    G = build_graph(["p", "q", "r", "s", "q'", "u", "u'"], edges)
    fam = Family("circle-dipole", {"lengths": ls}, G, True)
    fam.v0 = G.vertex_point("q")
    fam.marked.update(p=G.vertex_point("p"), q=fam.v0)
    return _finish(fam, 4)


FAMILIES: dict[str, Callable[..., Family]] = {
    "dipole": dipole,
    "wheel": wheel,
    "k4": k4,
    "chain": chain_of_circles,
    "theta-circle": theta_circle,
    "bouquet": bouquet,
    "circle-chords": circle_chords,
    "two-lens": two_lens,
    "k4-circle": k4_circle,
    "circle-dipole": circle_dipole_bridge,
}

_TAKES_GENUS = {"dipole", "wheel", "chain", "bouquet"}


def build_family(name: str, genus: int | None = None, lengths: Sequence | None = None, **params) -> Family:
    if name not in FAMILIES:
        raise ValueError(f"unknown family {name!r}; known: {', '.join(sorted(FAMILIES))}")
    if name in _TAKES_GENUS:
        if genus is None:
            raise ValueError(f"family {name!r} needs a genus")
        return FAMILIES[name](genus, lengths, **params)
    fam = FAMILIES[name](lengths=lengths, **params)
    if genus is not None and genus != fam.genus:
        raise ValueError(f"family {name!r} has genus {fam.genus}, not {genus}")
    return fam


# ---------------------------------------------------------------- census


def census_without_cut_vertices() -> list[Family]:
    """Bridgeless genus-3 graphs with no cut vertex, unit lengths unless noted."""
    return [dipole(3), two_lens((1, 1)), k4(), circle_chords(), two_lens((1, 2))]


def census_with_cut_vertices() -> list[Family]:
    """Genus-3 graphs with cut vertices, in the order 12, 8, 10, 24, 16, 24."""
    return [
        chain_of_circles(3, [1, 1, 1, 2, 1, 1]),
        theta_circle("1/3"),
        theta_circle("v"),
        chain_of_circles(3),
        theta_circle("1/2"),
        bouquet(3),
    ]


@dataclass
class CensusRow:
    family: Family
    loci: list
    total: int
    isolated: bool

    @property
    def count(self) -> int:
        return len(self.loci)


def census_row(fam: Family, method: str = "exact") -> CensusRow:
    G = fam.graph
    K = canonical_divisor(G)
    gm = sweep(G, K, method=method)
    loci = maximal_loci(G, K, gm)
    return CensusRow(fam, loci, sum(L.weight for L in loci), all(L.isolated for L in loci))


# ---------------------------------------------------------------- classification


def all_sequences(g: int) -> list[GapSequence]:
    """Every strictly increasing (n_1..n_g) inside 1..2g-1."""
    return [GapSequence(c) for c in combinations(range(1, 2 * g), g)]


def semigroup_sequences(g: int) -> set[GapSequence]:
    return {n for n in all_sequences(g) if semigroup_check(n, g)}


ACHIEVABLE = {
    2: {(1, 2), (1, 3)},
    3: {(1, 2, 3), (1, 2, 4), (1, 2, 5), (1, 3, 5)},
    4: {
        (1, 2, 3, 4),
        (1, 2, 3, 5),
        (1, 2, 3, 6),
        (1, 2, 3, 7),
        (1, 2, 4, 5),
        (1, 2, 4, 6),
        (1, 2, 4, 7),
        (1, 2, 5, 6),
        (1, 3, 5, 7),
    },
}

EXCLUDED_4 = {(1, 2, 5, 7), (1, 2, 6, 7)}


def witness_set(g: int) -> list[Family]:
    if g == 2:
        return [dipole(2), chain_of_circles(2)]
    if g == 3:
        return [dipole(3), k4()]
    if g == 4:
        return [dipole(4), wheel(4), k4_circle(), circle_dipole_bridge()]
    raise ValueError("classification is implemented for genus 2, 3 and 4")


def canonical_sequences(fam: Family, method: str = "exact") -> set[GapSequence]:
    G = fam.graph
    return sweep(G, canonical_divisor(G), method=method).achieved()


def classify(g: int, instances: Iterable[Family] | None = None, jobs: int = 1) -> set[GapSequence]:
    fams = list(instances) if instances is not None else witness_set(g)
    if any(f.genus != g for f in fams):
        raise ValueError("all instances must have the requested genus")
    out: set = set()
    for seqs in _map(canonical_sequences, fams, jobs):
        out |= seqs
    return out


def _map(fn, items, jobs):
    if jobs <= 1:
        return [fn(x) for x in items]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _random_length(rng: random.Random, max_den: int) -> Fraction:
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(q, 2 * q), q)


def random_genus4(rng: random.Random, max_den: int = 8) -> Family:
    """A genus-4 catalog topology with random lengths in [1, 2], denominators <= max_den."""
    kind = rng.choice(["dipole", "chain", "k4-circle", "circle-dipole", "wheel"])
    n = {"dipole": 5, "chain": 8, "k4-circle": 9, "circle-dipole": 9, "wheel": 8}[kind]
    ls = [_random_length(rng, max_den) for _ in range(n)]
    return build_family(kind, 4 if kind in _TAKES_GENUS else None, ls)


@dataclass
class ProbeReport:
    instances: int
    hits: list  # (family name, params, sequence)

    @property
    def ok(self) -> bool:
        return not self.hits


def top_gap_sequences(fam: Family) -> set[GapSequence]:
    """Canonical gap sequences whose last entry is 2g - 1.

    n_g = 2g - 1 holds exactly where r(K - (2g-2)(p)) >= 0, that is on
    the chip locus K_p(p) >= 2g - 2. Gap sequences are computed only
    there: pointwise at isolated points, by an edge sweep on edges that
    carry an interval of the locus.
    """
    G = fam.graph
    g = G.genus
    K = canonical_divisor(G)
    R = chip_locus(G, K, 2 * g - 2)
    out = {gap_sequence(G, K, Point(vertex=v)) for v in R.vertices}
    for j, ivs in R.intervals.items():
        if all(a == b for a, b in ivs):
            out |= {gap_sequence(G, K, G.point(j, a)) for a, _ in ivs}
        else:
            m = sweep_edge(G, K, j)
            out |= {n for a, b, n in m.pieces() if R.contains(G.point(j, (a + b) / 2))}
    return {n for n in out if n[-1] == 2 * g - 1}


def exclusion_probe(
    samples: int = 100, seed: int = 0, max_den: int = 8, families: list | None = None, full: bool = False
) -> ProbeReport:
    """Look for the excluded genus-4 sequences on random instances.

    Both excluded sequences end in 7, so by default only the top-gap
    locus is examined (see :func:`top_gap_sequences`). ``full=True`` runs
    the complete sweep instead.
    """
    rng = random.Random(seed)
    fams = families if families is not None else [random_genus4(rng, max_den) for _ in range(samples)]
    hits = []
    for fam in fams:
        seqs = canonical_sequences(fam) if full else top_gap_sequences(fam)
        for n in seqs:
            if tuple(n) in EXCLUDED_4:
                hits.append((fam.name, fam.params, n))
    return ProbeReport(len(fams), hits)


def remark_point(g: int) -> tuple[Family, Point]:
    """Unit dipole of genus g and the point 1/2 - 1/(4(2g-3)) on e0."""
    fam = dipole(g)
    return fam, fam.graph.point(0, Fraction(1, 2) - Fraction(1, 4 * (2 * g - 3)))


__all__ = [
    "ACHIEVABLE",
    "EXCLUDED_4",
    "FAMILIES",
    "CensusRow",
    "Family",
    "ProbeReport",
    "all_sequences",
    "bouquet",
    "build_family",
    "census_row",
    "census_with_cut_vertices",
    "census_without_cut_vertices",
    "chain_of_circles",
    "circle_chords",
    "circle_dipole_bridge",
    "classify",
    "dipole",
    "exclusion_probe",
    "top_gap_sequences",
    "k4",
    "k4_circle",
    "random_genus4",
    "remark_point",
    "semigroup_sequences",
    "theta_circle",
    "two_lens",
    "wheel",
    "witness_set",
]
