"""Gap maps along edges, Weierstrass loci, maximal loci and the weight functional mu.

Two sweeps are available.

``exact`` (default) runs the rank-profile computation with the moving
point written as ``t`` on an open interval of the edge (see
:mod:`tropws.param`). Every comparison whose sign changes inside the
interval splits it at the root, so the result is the exact partition of
the edge into points and open cells, with no denominator bound.

``bisect`` samples a seed grid, bisects between samples whose values
differ, snaps to the simplest rational and certifies it at
``+-1/(2 qmax^2)``. It only sees what the grid separates, and is kept
as an independent cross-check.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

from . import param
from .divisor import Divisor, GapSequence, trivial_sequence
from .graph import MetricGraph, Point, fmt_rational
from .rank import (
    IntervalCache,
    Table,
    gaps_from_profile,
    model_points,
    profile_from_table,
    rank,
)
from .reduction import internal_point, reduce
from .region import Region


class SweepError(RuntimeError):
    pass


# ---------------------------------------------------------------- gap maps


@dataclass(frozen=True)
class EdgeGapMap:
    """Gap sequence along one edge.

    ``cells`` alternates open cells and breakpoints:
    ``cells[0]`` is the open interval ``(0, b_1)``, ``points[i]`` the value
    at ``breakpoints[i]``, and so on. ``start``/``end`` are the values at
    the endpoint vertices.
    """

    edge: int
    length: Fraction
    breakpoints: tuple
    points: tuple
    cells: tuple
    start: GapSequence
    end: GapSequence

    def value_at(self, t: Fraction) -> GapSequence:
        if t == 0:
            return self.start
        if t == self.length:
            return self.end
        for i, b in enumerate(self.breakpoints):
            if t == b:
                return self.points[i]
            if t < b:
                return self.cells[i]
        return self.cells[-1]

    def pieces(self):
        """``(a, b, value)`` for endpoints, open cells and breakpoints in order."""
        xs = [Fraction(0), *self.breakpoints, self.length]
        yield (xs[0], xs[0], self.start)
        for i, v in enumerate(self.cells):
            yield (xs[i], xs[i + 1], v)
            if i < len(self.points):
                yield (xs[i + 1], xs[i + 1], self.points[i])
        yield (xs[-1], xs[-1], self.end)

    def check_semicontinuity(self) -> bool:
        xs = [self.start, *[x for pair in zip(self.cells, self.points) for x in pair], self.cells[-1], self.end]
        # xs alternates point, cell, point, ..., cell, point
        for i in range(1, len(xs), 2):
            if not (xs[i - 1].dominates(xs[i]) and xs[i + 1].dominates(xs[i])):
                return False
        return True


def _merge(pieces: list, length: Fraction, j: int) -> EdgeGapMap:
    """Collapse raw pieces into an :class:`EdgeGapMap`."""
    pieces = sorted(pieces, key=lambda x: (x[0], x[1]))
    start, end = pieces[0][2], pieces[-1][2]
    inner = pieces[1:-1]
    opens = [x for x in inner if x[0] < x[1]]
    pts = {x[0]: x[2] for x in inner if x[0] == x[1]}
    bps, pvals, cvals = [], [], []
    cur = opens[0][2]
    for a, b, v in opens[1:]:
        pv = pts[a]
        if v == cur and pv == cur:
            continue
        bps.append(a)
        pvals.append(pv)
        cvals.append(cur)
        cur = v
    cvals.append(cur)
    return EdgeGapMap(j, length, tuple(bps), tuple(pvals), tuple(cvals), start, end)


def _profile(G, D, r, d, target, W, cache=None) -> tuple:
    tab = Table(G, D, target, W, cache)
    for _ in range(r):
        tab.next_level()
    prof = profile_from_table(tab.a, r, d)
    if prof[0] != r:
        raise AssertionError("rank profile disagrees with the rank")
    return tuple(prof)


class _Evaluator:
    def __init__(self, G: MetricGraph, D: Divisor, r: int | None = None):
        self.G = G
        self.D = D
        self.r = rank(G, D) if r is None else r
        if self.r < 0:
            raise ValueError("negative rank divisor has no gap sequence")
        self.d = D.degree
        self.W = model_points(G, D)
        self.calls = 0

    def at_point(self, p: Point) -> GapSequence:
        self.calls += 1
        prof = _profile(self.G, self.D, self.r, self.d, internal_point(p), self.W)
        return gaps_from_profile(prof, self.d)

    def at_offset(self, j: int, t: Fraction) -> GapSequence:
        return self.at_point(self.G.point(j, t))

    def on_interval(self, j: int, cache) -> GapSequence:
        self.calls += 1
        prof = _profile(self.G, self.D, self.r, self.d, ("e", j, param.Lin.param()), self.W, cache)
        return gaps_from_profile(prof, self.d)


class _ChipEvaluator:
    """Whether D_p(p) >= k, i.e. r(D - k(p)) >= 0. One reduction per call."""

    def __init__(self, G: MetricGraph, D: Divisor, k: int):
        self.G, self.D, self.k = G, D, k
        self.W = model_points(G, D)

    def at_point(self, p: Point) -> bool:
        return Table(self.G, self.D, internal_point(p), self.W).a[0] >= self.k

    def at_offset(self, j: int, t: Fraction) -> bool:
        return self.at_point(self.G.point(j, t))

    def on_interval(self, j: int, cache) -> bool:
        return Table(self.G, self.D, ("e", j, param.Lin.param()), self.W, cache).a[0] >= self.k


def chip_locus(G: MetricGraph, D: Divisor, k: int) -> Region:
    """Exact set of points p with D_p(p) >= k.

    Equivalently r(D - k(p)) >= 0. For k = deg(D) this is the set of p
    with D linearly equivalent to k(p). Much cheaper than a full sweep
    since only the coefficient at the moving point is tracked.
    """
    ev = _ChipEvaluator(G, D, k)
    verts = [v for v in range(len(G.vertices)) if ev.at_point(Point(vertex=v))]
    vv = {v: v in verts for v in range(len(G.vertices))}
    ivs: dict[int, list] = {}
    for j in range(len(G.edges)):
        m = _sweep_exact(ev, j, vv)
        for a, b, hit in m.pieces():
            if hit:
                ivs.setdefault(j, []).append((a, b))
    return Region(G, ivs, verts)


def _stops(G: MetricGraph, D: Divisor, j: int) -> list[Fraction]:
    ts = sorted(p.t for p in D.support if not p.is_vertex and p.edge == j)
    return [Fraction(0), *ts, G.edges[j].length]


def _sweep_exact(ev: _Evaluator, j: int, vertex_values: dict) -> EdgeGapMap:
    G = ev.G
    e = G.edges[j]
    stops = _stops(G, ev.D, j)
    pieces = [(Fraction(0), Fraction(0), vertex_values[e.u]), (e.length, e.length, vertex_values[e.v])]
    for t in stops[1:-1]:
        pieces.append((t, t, ev.at_offset(j, t)))
    for lo, hi in zip(stops, stops[1:]):
        cache = IntervalCache()
        todo = [(lo, hi)]
        while todo:
            a, b = todo.pop()
            try:
                with param.over(a, b):
                    v = ev.on_interval(j, cache)
            except param.Split as s:
                t = s.at
                pieces.append((t, t, ev.at_offset(j, t)))
                todo.append((a, t))
                todo.append((t, b))
                continue
            pieces.append((a, b, v))
    return _merge(pieces, e.length, j)


def simplest_between(x: Fraction, y: Fraction) -> Fraction:
    """The rational with the smallest denominator in the closed interval [x, y]."""
    if x > y:
        x, y = y, x
    n = math.floor(x)
    if n == x:
        return Fraction(n)
    if n + 1 <= y:
        return Fraction(n + 1)
    return n + 1 / simplest_between(1 / (y - n), 1 / (x - n))


def default_qmax(G: MetricGraph, D: Divisor) -> int:
    env = os.environ.get("TROPWS_QMAX")
    if env:
        return int(env)
    lam = G.lcm_denominator(p.t for p in D.support if not p.is_vertex)
    return 120 * lam * (D.degree + 1)


def _farey(lo: Fraction, hi: Fraction, order: int) -> list[Fraction]:
    out = {lo, hi}
    for q in range(1, order + 1):
        for k in range(math.ceil(lo * q), math.floor(hi * q) + 1):
            out.add(Fraction(k, q))
    return sorted(x for x in out if lo <= x <= hi)


def _sweep_bisect(ev: _Evaluator, j: int, vertex_values: dict, qmax: int, grid: int) -> EdgeGapMap:
    G = ev.G
    e = G.edges[j]
    stops = _stops(G, ev.D, j)
    eps = Fraction(1, qmax * qmax)
    h = eps / 2
    memo: dict[Fraction, GapSequence] = {}

    def val(t):
        if t not in memo:
            if t == 0:
                memo[t] = vertex_values[e.u]
            elif t == e.length:
                memo[t] = vertex_values[e.v]
            else:
                memo[t] = ev.at_offset(j, t)
        return memo[t]

    breaks: set[Fraction] = set(stops[1:-1])

    def locate(a, b):
        va, vb = val(a), val(b)
        while b - a >= eps:
            m = (a + b) / 2
            vm = val(m)
            if vm != va and vm != vb:
                locate(a, m)
                locate(m, b)
                return
            if vm == va:
                a = m
            else:
                b = m
        c = simplest_between(a, b)
        left_ok = c - h <= a or val(c - h) == va
        right_ok = c + h >= b or val(c + h) == vb
        if c.denominator > qmax or not (left_ok and right_ok):
            raise SweepError("breakpoint denominator exceeds Q_max; rerun with larger bound")
        breaks.add(c)

    for lo, hi in zip(stops, stops[1:]):
        seeds = _farey(lo, hi, grid)
        for a, b in zip(seeds, seeds[1:]):
            if val(a) != val(b):
                locate(a, b)
    bs = sorted(b for b in breaks if 0 < b < e.length)
    xs = [Fraction(0), *bs, e.length]
    pieces = [(Fraction(0), Fraction(0), val(Fraction(0))), (e.length, e.length, val(e.length))]
    for b in bs:
        pieces.append((b, b, val(b)))
    for a, b in zip(xs, xs[1:]):
        pieces.append((a, b, val((a + b) / 2)))
    return _merge(pieces, e.length, j)


def sweep_edge(
    G: MetricGraph,
    D: Divisor,
    edge: int,
    *,
    method: str = "exact",
    qmax: int | None = None,
    grid: int | None = None,
    vertex_values: dict | None = None,
    _ev: _Evaluator | None = None,
) -> EdgeGapMap:
    ev = _ev or _Evaluator(G, D)
    if vertex_values is None:
        e = G.edges[edge]
        vertex_values = {v: ev.at_point(Point(vertex=v)) for v in {e.u, e.v}}
    if method == "exact":
        return _sweep_exact(ev, edge, vertex_values)
    if method == "bisect":
        qmax = qmax or default_qmax(G, D)
        grid = grid or G.lcm_denominator(p.t for p in D.support if not p.is_vertex) * (D.degree + 1)
        return _sweep_bisect(ev, edge, vertex_values, qmax, grid)
    raise ValueError(f"unknown sweep method {method!r}")


@dataclass(frozen=True)
class GapMap:
    """Gap sequences over the whole graph."""

    G: MetricGraph
    D: Divisor
    r: int
    vertices: dict
    edges: tuple

    def value_at(self, p: Point) -> GapSequence:
        if p.is_vertex:
            return self.vertices[p.vertex]
        return self.edges[p.edge].value_at(p.t)

    def achieved(self) -> set:
        out = set(self.vertices.values())
        for m in self.edges:
            out.update(m.points)
            out.update(m.cells)
        return out

    def region(self, pred: Callable[[GapSequence], bool]) -> Region:
        ivs: dict[int, list] = {}
        verts = [v for v, n in self.vertices.items() if pred(n)]
        for m in self.edges:
            for a, b, n in m.pieces():
                if pred(n):
                    ivs.setdefault(m.edge, []).append((a, b))
        return Region(self.G, ivs, verts)

    def cells_in(self, R: Region):
        """Values of all cells contained in ``R`` (``R`` a union of cells)."""
        out = [n for v, n in self.vertices.items() if v in R.vertices]
        for m in self.edges:
            for a, b, n in m.pieces():
                if a == b and (a == 0 or a == m.length):
                    continue
                probe = Point(edge=m.edge, t=(a + b) / 2)
                if R.contains(probe):
                    out.append(n)
        return out

    def check_semicontinuity(self) -> bool:
        return all(m.check_semicontinuity() for m in self.edges)


def sweep(G: MetricGraph, D: Divisor, *, method: str = "exact", qmax=None, grid=None) -> GapMap:
    ev = _Evaluator(G, D)
    vv = {v: ev.at_point(Point(vertex=v)) for v in range(len(G.vertices))}
    maps = tuple(
        sweep_edge(G, D, j, method=method, qmax=qmax, grid=grid, vertex_values=vv, _ev=ev)
        for j in range(len(G.edges))
    )
    gm = GapMap(G, D, ev.r, vv, maps)
    if not gm.check_semicontinuity():
        raise AssertionError("gap map is not upper-semicontinuous")
    return gm


# ---------------------------------------------------------------- loci


def wl(G: MetricGraph, D: Divisor, gm: GapMap | None = None) -> Region:
    gm = gm or sweep(G, D)
    return gm.region(lambda n: not n.is_trivial())


def wl_ge(G: MetricGraph, D: Divisor, n: Iterable[int], gm: GapMap | None = None) -> Region:
    gm = gm or sweep(G, D)
    n = GapSequence(n, D.degree)
    if len(n) != gm.r + 1:
        raise ValueError(f"sequence {n} has the wrong length for rank {gm.r}")
    return gm.region(lambda x: x.dominates(n))


@dataclass(frozen=True)
class WeightedLocus:
    region: Region
    gap: GapSequence
    weight: int
    mu: int | None = None

    @property
    def isolated(self) -> bool:
        R = self.region
        return (len(R.vertices) + sum(len(v) for v in R.intervals.values())) == 1 and all(
            a == b for ivs in R.intervals.values() for a, b in ivs
        )


def maximal_loci(G: MetricGraph, D: Divisor, gm: GapMap | None = None, with_mu: bool = False) -> list[WeightedLocus]:
    gm = gm or sweep(G, D)
    seen: dict[Region, WeightedLocus] = {}
    for n in sorted(gm.achieved()):
        if n.is_trivial():
            continue
        for comp in gm.region(lambda x: x.dominates(n)).components():
            if comp in seen:
                continue
            if all(v == n for v in gm.cells_in(comp)):
                m = mu(G, D, comp, r=gm.r) if with_mu else None
                seen[comp] = WeightedLocus(comp, n, n.weight, m)
    return list(seen.values())


def mu(G: MetricGraph, D: Divisor, B: Region, *, r: int | None = None, variant: str = "normative") -> int:
    """The weight functional of a closed region.

    ``normative``: sum of D over B + (g(B) - c(B)) r - sum of outgoing
    slopes of f_p at the boundary. ``agr``: the component formula with
    ``(g(A) - 1) r`` and the slope sum added, kept for comparison.
    """
    if B.is_empty():
        raise ValueError("mu of an empty region")
    if r is None:
        r = rank(G, D)
    chips = D.restrict_sum(B)
    slopes = 0
    for p, dirs in B.boundary():
        f = reduce(G, D, p).witness
        slopes += sum(f.slope(p, nu) for nu in dirs)
    if variant == "normative":
        return chips + (B.genus - B.component_count) * r - slopes
    if variant == "agr":
        if B.component_count != 1:
            raise ValueError("the component formula needs a connected region")
        return chips + (B.genus - 1) * r + slopes
    raise ValueError(f"unknown variant {variant!r}")


@dataclass
class Report:
    lines: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def check(self, cond: bool, text: str, tag: str) -> None:
        line = f"{text} {'✓' if cond else '✗'}  [{tag}]"
        self.lines.append(line)
        if not cond:
            self.failures.append(line)


def verify_totals(G: MetricGraph, D: Divisor, gm: GapMap | None = None) -> Report:
    gm = gm or sweep(G, D)
    g, r, d = G.genus, gm.r, D.degree
    rep = Report()
    expected = r * g - r + d
    comps = wl(G, D, gm).components()
    mus = [mu(G, D, A, r=r) for A in comps]
    rep.data.update(components=[A.describe() for A in comps], mu=mus, expected=expected)
    rep.check(sum(mus) == expected, f"Σ μ = {sum(mus)} = rg−r+d = {expected}", "total weight of components")
    isolated = all(len(A.vertices) + sum(len(v) for v in A.intervals.values()) == 1 and A.genus == 0 and not any(a != b for v in A.intervals.values() for a, b in v) for A in comps)
    rep.data["finite"] = isolated
    if isolated:
        total = 0
        for A in comps:
            p = Point(vertex=next(iter(A.vertices))) if A.vertices else Point(edge=next(iter(A.intervals)), t=next(iter(A.intervals.values()))[0][0])
            n = gm.value_at(p)
            total += n.weight
            Dp = reduce(G, D, p, witness=False).reduced.coeff(p)
            want = GapSequence([*range(1, r + 1), Dp + 1])
            rep.check(n == want, f"n({G.fmt_point(p)}) = {n} = (1..r, D_p(p)+1)", "isolated point gap formula")
        rep.data["total_weight"] = total
        target = "g²−1" if D == _K(G) else "rg−r+d"
        rep.check(total == expected, f"Σ wt = {total} = {target}", "finite locus total weight")
    return rep


def _K(G):
    from .divisor import canonical_divisor

    return canonical_divisor(G)


# ---------------------------------------------------------------- checks


def semigroup_check(n: Iterable[int], g: int | None = None) -> bool:
    """True iff the complement of ``n`` in the positive integers is closed under addition."""
    gaps = set(n)
    if g is not None and len(gaps) != g:
        raise ValueError("sequence length must equal the genus")
    top = max(gaps)
    non = [x for x in range(1, top + 1) if x not in gaps]
    return not any(a + b in gaps for a in non for b in non)


def gap_jump_check(m: EdgeGapMap) -> bool:
    """At each breakpoint the first raised entry must leave room below the next."""
    triples = []
    xs = list(m.pieces())
    for i in range(0, len(xs), 2):
        point = xs[i][2]
        for k in (i - 1, i + 1):
            if 0 <= k < len(xs):
                triples.append((xs[k][2], point))
    for n, at in triples:
        if n == at:
            continue
        k = next(i for i in range(len(n)) if n[i] < at[i])
        if k + 1 < len(n) and not n[k] + 1 < n[k + 1]:
            return False
    return True


def format_edge_map(G: MetricGraph, m: EdgeGapMap) -> list[str]:
    out = []
    for a, b, n in m.pieces():
        where = fmt_rational(a) if a == b else f"({fmt_rational(a)},{fmt_rational(b)})"
        out.append(f"e{m.edge} {where} {n} wt={n.weight}")
    return out


__all__ = [
    "EdgeGapMap",
    "GapMap",
    "Report",
    "SweepError",
    "WeightedLocus",
    "chip_locus",
    "gap_jump_check",
    "maximal_loci",
    "mu",
    "semigroup_check",
    "simplest_between",
    "sweep",
    "sweep_edge",
    "trivial_sequence",
    "verify_totals",
    "wl",
    "wl_ge",
]
