"""Randomized comparison of the main engine against the lattice oracle.

Each case draws a small graph, a lattice-supported divisor and compares

* ``rank`` with ``oracle.brute_rank``,
* the reduction witness (``reduced - D``) with SNF principality,
* for a degree-zero divisor, "reduces to zero" with SNF principality.

Deterministic for a given seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import catalog
from .divisor import Divisor
from .graph import MetricGraph
from .oracle import OracleTooLarge, brute_rank, lattice_model
from .rank import enumerate_rank, rank
from .reduction import reduce


def small_graphs() -> list[MetricGraph]:
    """Catalog graphs whose unit lattice has at most a handful of vertices."""
    return [
        catalog.dipole(2).graph,
        catalog.dipole(3).graph,
        catalog.chain_of_circles(2).graph,
        catalog.chain_of_circles(3).graph,
        catalog.k4().graph,
        catalog.bouquet(2).graph,
        catalog.theta_circle("v").graph,
        catalog.two_lens((1, 1)).graph,
        catalog.wheel(4).graph,
    ]


def _random_graph(rng: random.Random) -> MetricGraph:
    kind = rng.randrange(4)
    half = lambda: Fraction(rng.choice([1, 2, 3]), 2)  # noqa: E731
    if kind == 0:
        return catalog.two_lens((half(), half())).graph
    if kind == 1:
        g = rng.choice([2, 3])
        return catalog.dipole(g, [half() for _ in range(g + 1)]).graph
    if kind == 2:
        return catalog.chain_of_circles(2, [half() for _ in range(4)]).graph
    return rng.choice(small_graphs())


@dataclass
class Disagreement:
    kind: str
    graph: MetricGraph
    divisor: Divisor
    detail: str


@dataclass
class CheckReport:
    cases: int = 0
    rank_checks: int = 0
    witness_checks: int = 0
    principal_checks: int = 0
    problems: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.problems


def _random_divisor(rng, pts, deg_lo, deg_hi) -> Divisor:
    while True:
        n = rng.randint(1, 4)
        D = Divisor([(rng.choice(pts), rng.randint(-2, 3)) for _ in range(n)])
        if deg_lo <= D.degree <= deg_hi:
            return D


def run(cases: int = 200, seed: int = 0, max_vertices: int = 12) -> CheckReport:
    rng = random.Random(seed)
    rep = CheckReport()
    while rep.cases < cases:
        G = _random_graph(rng)
        try:
            M = lattice_model(G, (), max_vertices)
        except OracleTooLarge:
            continue
        pts = M.points()
        rep.cases += 1

        D = _random_divisor(rng, pts, -1, 4)
        ours = rank(G, D)
        plain = enumerate_rank(G, D).rank if 0 <= D.degree else -1
        truth = brute_rank(G, D, max_vertices=max_vertices)
        rep.rank_checks += 1
        if not ours == plain == truth:
            rep.problems.append(Disagreement("rank", G, D, f"rank={ours} enum={plain} brute={truth}"))

        q = rng.choice(pts)
        res = reduce(G, D, q)
        rep.witness_checks += 1
        if not M.is_principal(res.reduced - D):
            rep.problems.append(Disagreement("witness", G, D, f"reduced - D not principal at {G.fmt_point(q)}"))
        if res.witness.div() != res.reduced - D:
            rep.problems.append(Disagreement("witness", G, D, "div(witness) != reduced - D"))

        Z = _random_divisor(rng, pts, 0, 0)
        by_reduction = reduce(G, Z, q, witness=False).reduced == Divisor()
        rep.principal_checks += 1
        if by_reduction != M.is_principal(Z):
            rep.problems.append(Disagreement("principal", G, Z, f"reduction says {by_reduction}"))
    return rep


__all__ = ["CheckReport", "Disagreement", "run", "small_graphs"]
