"""Baker-Norine rank, gap sequences and weights.

Everything here reduces to one table. Fix a point p and a rank-determining
set W (vertices of a loopless model containing supp(D) and p), and let
W' = W minus p. For i >= 0 put

    a_i = min over effective E' of degree i on W' of (D - E')_p(p).

An effective E of degree k on W splits as E = j(p) + E' and
D - m(p) - E is equivalent to an effective divisor exactly when
(D - E')_p(p) >= m + j. Hence

    r(D - m(p)) >= k  iff  min_{i <= k} (a_i + i) >= m + k,

which gives the whole rank profile m -> r(D - m(p)), and r(D) itself for
m = 0. Children of a multiset are reduced starting from the parent's
reduced configuration, which is already p-reduced up to one chip.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import param
from .divisor import Divisor, GapSequence, canonical_divisor
from .graph import MetricGraph, Point
from .reduction import (
    Reducer,
    base_point,
    config_from_divisor,
    internal_point,
    public_point,
    reduce,
)


class DictCache:
    def __init__(self):
        self._d = {}

    def get(self, key):
        return self._d.get(key)

    def put(self, key, value):
        self._d[key] = value


class IntervalCache:
    """Results computed on an open parameter interval, reused on subintervals."""

    def __init__(self):
        self._d: dict = {}

    def get(self, key):
        lo, hi = param.current()
        for a, b, val in self._d.get(key, ()):
            if a <= lo and hi <= b:
                return val
        return None

    def put(self, key, value):
        lo, hi = param.current()
        self._d.setdefault(key, []).append((lo, hi, value))


class CachedReducer(Reducer):
    def __init__(self, G, target, cache):
        super().__init__(G, target)
        self.cache = cache

    def loan(self, x, want_witness=False):
        if want_witness:
            return super().loan(x, True)
        key = ("loan", x[0], x[1], x[2] if x[0] == "e" else None)
        hit = self.cache.get(key)
        if hit is None:
            hit = super().loan(x, False)
            self.cache.put(key, hit)
        return hit


def model_points(G: MetricGraph, D: Divisor, extra=()) -> list:
    """Internal points of the rank-determining set: vertices, supp(D), extras."""
    pts = [("v", i) for i in range(len(G.vertices))]
    seen = set()
    for p in [*D.support, *extra]:
        if not p.is_vertex and p not in seen:
            seen.add(p)
            pts.append(internal_point(p))
    return pts


def _same(w, target) -> bool:
    if w[0] != target[0] or w[1] != target[1]:
        return False
    return w[0] == "v" or (not isinstance(target[2], param.Lin) and w[2] == target[2])


class Table:
    """Levelwise reduced table for ``D`` aimed at ``target``."""

    def __init__(self, G, D, target, W, cache=None):
        self.G = G
        self.target = target
        self.W = [w for w in W if not _same(w, target)]
        self.cache = cache if cache is not None else DictCache()
        self.reducer = CachedReducer(G, target, self.cache)
        root = self.cache.get(())
        if root is None:
            root = config_from_divisor(G, D, target)
            self.reducer.run(root)
            self.cache.put((), root)
        self.level = [((), 0, root)]
        self.a = [root.target_count()]
        self.argmin = [()]

    def next_level(self, fail_below: int | None = None):
        """Compute the next a_i. With ``fail_below`` stop at the first value below it.

        Returns the offending multiset in that case, else None.
        """
        nxt = []
        best = None
        arg = None
        for ms, last, cfg in self.level:
            for wi in range(last, len(self.W)):
                key = ms + (wi,)
                c = self.cache.get(key)
                if c is None:
                    c = cfg.copy()
                    c.add(self.W[wi], -1)
                    self.reducer.run(c)
                    self.cache.put(key, c)
                h = c.target_count()
                if fail_below is not None and h < fail_below:
                    return key
                if best is None or h < best:
                    best, arg = h, key
                nxt.append((key, wi, c))
        if best is None:
            raise AssertionError("empty rank-determining set")
        self.level = nxt
        self.a.append(best)
        self.argmin.append(arg)
        return None

    def multiset(self, key) -> list:
        return [self.W[i] for i in key]


def profile_from_table(a: list[int], r: int, d: int) -> list[int]:
    """r(D - m(p)) for m = 0..d+1 from a_0..a_r."""
    b = []
    cur = None
    for i, x in enumerate(a[: r + 1]):
        cur = x + i if cur is None else min(cur, x + i)
        b.append(cur)
    prof = []
    for m in range(d + 2):
        best = -1
        for k in range(r + 1):
            if b[k] >= m + k:
                best = k
        prof.append(best)
    return prof


@dataclass(frozen=True)
class RankResult:
    rank: int
    witness: Divisor | None  # effective E of degree rank+1 with D - E not effective-equivalent
    method: str


def rank_with_witness(G: MetricGraph, D: Divisor) -> RankResult:
    d = D.degree
    g = G.genus
    if d < 0:
        return RankResult(-1, Divisor(), "degree<0")
    if d > 2 * g - 2:
        return RankResult(d - g, None, "riemann-roch")
    if D == canonical_divisor(G):
        return RankResult(g - 1, None, "canonical")
    return enumerate_rank(G, D)


def enumerate_rank(G: MetricGraph, D: Divisor, q: Point | None = None) -> RankResult:
    """Rank by enumeration over a rank-determining set, no shortcuts."""
    q = q if q is not None else base_point(G)
    target = internal_point(q)
    tab = Table(G, D, target, model_points(G, D, [q]))
    if tab.a[0] < 0:
        return RankResult(-1, Divisor(), "enumeration")
    best = tab.a[0]
    k = 0
    while True:
        k += 1
        if best < k:
            i = min(range(k), key=lambda i: tab.a[i] + i)
            E = _as_divisor(G, tab.multiset(tab.argmin[i])) + Divisor.point(q, k - i)
            return RankResult(k - 1, E, "enumeration")
        bad = tab.next_level(fail_below=0)
        if bad is not None:
            return RankResult(k - 1, _as_divisor(G, tab.multiset(bad)), "enumeration")
        best = min(best, tab.a[k] + k)


def _as_divisor(G, pts) -> Divisor:
    return Divisor([(public_point(G, w), 1) for w in pts])


def rank(G: MetricGraph, D: Divisor) -> int:
    return rank_with_witness(G, D).rank


def rank_profile(G: MetricGraph, D: Divisor, p: Point, r: int | None = None) -> list[int]:
    """``[r(D - m(p)) for m in 0..deg(D)+1]``."""
    if r is None:
        r = rank(G, D)
    d = D.degree
    if r < 0:
        return [-1] * (d + 2)
    tab = Table(G, D, internal_point(p), model_points(G, D, [p]))
    for _ in range(r):
        tab.next_level()
    prof = profile_from_table(tab.a, r, d)
    if prof[0] != r:
        raise AssertionError(f"rank mismatch at {G.fmt_point(p)}: {prof[0]} vs {r}")
    return prof


def gaps_from_profile(prof: list[int], d: int) -> GapSequence:
    return GapSequence([m for m in range(1, len(prof)) if prof[m] < prof[m - 1]], d)


def gap_sequence(G: MetricGraph, D: Divisor, p: Point) -> GapSequence:
    r = rank(G, D)
    if r < 0:
        raise ValueError("negative rank divisor has no gap sequence")
    return gaps_from_profile(rank_profile(G, D, p, r), D.degree)


def weight(n) -> int:
    return sum(x - i for i, x in enumerate(n, start=1))


def is_weierstrass(G: MetricGraph, D: Divisor, p: Point) -> bool:
    r = rank(G, D)
    if r < 0:
        raise ValueError("negative rank divisor has no gap sequence")
    by_gaps = not gap_sequence(G, D, p).is_trivial()
    by_reduction = reduce(G, D, p, witness=False).reduced.coeff(p) >= r + 1
    if by_gaps != by_reduction:
        raise AssertionError("Weierstrass characterizations disagree")
    return by_gaps


def hyperelliptic_rank(G: MetricGraph, D: Divisor, v0: Point | None) -> int:
    """Rank of an effective divisor on a hyperelliptic graph with fixed point v0."""
    if v0 is None:
        raise ValueError("hyperelliptic fast path requires v0")
    if any(k < 0 for k in D.values()):
        raise ValueError("hyperelliptic fast path needs an effective divisor")
    at_v0 = reduce(G, D, v0, witness=False).reduced.coeff(v0)
    p = at_v0 // 2
    d = D.degree
    return p if d - p <= G.genus else d - G.genus


def clifford_check(G: MetricGraph, D: Divisor) -> bool:
    r = rank(G, D)
    K = canonical_divisor(G)
    if r < 0 or rank(G, K - D) < 0:
        raise ValueError("Clifford bound applies to special divisors only")
    return 2 * r <= D.degree
