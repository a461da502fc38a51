"""Random objects shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from tropws import catalog
from tropws.divisor import Divisor
from tropws.graph import MetricGraph, Point
from tropws.plfunction import PLFunction


def catalog_graphs(max_genus: int = 4) -> list[MetricGraph]:
    fams = [
        catalog.dipole(2),
        catalog.dipole(3),
        catalog.dipole(4),
        catalog.dipole(3, [1, "1/2", "3/2", 2]),
        catalog.chain_of_circles(2),
        catalog.chain_of_circles(3),
        catalog.chain_of_circles(3, [1, 1, 1, 2, 1, 1]),
        catalog.k4(),
        catalog.k4(["1/2", 1, 1, 2, 1, "3/2"]),
        catalog.wheel(4),
        catalog.theta_circle("1/3"),
        catalog.theta_circle("v"),
        catalog.bouquet(3),
        catalog.circle_chords(),
        catalog.two_lens((1, 2)),
        catalog.circle_dipole_bridge(),
        catalog.k4_circle(),
    ]
    return [f.graph for f in fams if f.genus <= max_genus]


def random_point(rng: random.Random, G: MetricGraph, max_den: int = 4) -> Point:
    if rng.random() < 0.4:
        return Point(vertex=rng.randrange(len(G.vertices)))
    j = rng.randrange(len(G.edges))
    L = G.edges[j].length
    q = rng.randint(2, max_den)
    return G.point(j, L * Fraction(rng.randint(1, q - 1), q))


def random_divisor(rng: random.Random, G: MetricGraph, deg_lo: int, deg_hi: int, terms: int = 4) -> Divisor:
    while True:
        D = Divisor([(random_point(rng, G), rng.randint(-2, 3)) for _ in range(rng.randint(1, terms))])
        if deg_lo <= D.degree <= deg_hi:
            return D


def random_effective(rng: random.Random, G: MetricGraph, deg: int) -> Divisor:
    return Divisor([(random_point(rng, G), 1) for _ in range(deg)]) if deg else Divisor()


def firing_function(G: MetricGraph, verts, interior, delta: Fraction) -> PLFunction:
    """min(delta, dist(., A)) for A = given vertices and interior points.

    ``delta`` must be at most half the gap between consecutive special
    points on every edge so the pieces do not interact.
    """
    A = set(verts)
    vv = [Fraction(0) if i in A else delta for i in range(len(G.vertices))]
    knots: dict[int, list] = {}
    for j, e in enumerate(G.edges):
        marks = sorted(t for (k, t) in interior if k == j)
        stops = []  # (position, in A?)
        stops.append((Fraction(0), e.u in A))
        stops.extend((t, True) for t in marks)
        stops.append((e.length, e.v in A))
        pts = []
        for (a, ina), (b, inb) in zip(stops, stops[1:]):
            if a > 0:
                pts.append((a, Fraction(0) if ina else delta))
            lo = a + delta if ina else None
            hi = b - delta if inb else None
            if lo is not None and hi is not None and lo == hi:
                pts.append((lo, delta))
                continue
            if lo is not None and lo < b:
                pts.append((lo, delta))
            if hi is not None and hi > a:
                pts.append((hi, delta))
        inner = [(t, v) for t, v in pts if 0 < t < e.length]
        if inner:
            knots[j] = sorted(set(inner))
    return PLFunction(G, vv, knots)


def random_function(rng: random.Random, G: MetricGraph, pieces: int = 3) -> PLFunction:
    """Integer combination of small firing functions."""
    f = PLFunction.constant(G)
    for _ in range(pieces):
        verts = [i for i in range(len(G.vertices)) if rng.random() < 0.4]
        interior = []
        for j, e in enumerate(G.edges):
            if rng.random() < 0.3:
                interior.append((j, e.length * Fraction(rng.randint(1, 3), 4)))
        if not verts and not interior:
            verts = [0]
        gap = min(e.length for e in G.edges) / 8
        delta = gap * Fraction(rng.randint(1, 4), 4)
        c = rng.choice([-2, -1, 1, 2])
        f = f + firing_function(G, verts, interior, delta).scale(c)
    return f
