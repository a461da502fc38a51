"""q-reduced divisors by Dhar burning on the metric graph.

The engine stores chips at vertices and at interior edge positions and
repeats two steps until the fire started at q consumes the whole graph:

1. burn: a point catches fire once more incident directions are burning
   than it holds chips; empty edge segments always burn;
2. fire: the unburnt closed set A sends one chip out along each burning
   direction at its boundary, all by the same distance ``delta``, the
   length of the shortest such segment.

Firing A by ``delta`` adds ``div(min(delta, dist(., A)))``, so the sum of
these functions is the witness ``f_q`` with ``D + div(f_q) = D_q``.

Chips missing away from q are first borrowed from q: with ``c = g + 1``
the divisor ``c(q) - (x)`` has degree g and so nonnegative rank, hence the
x-reduced form ``S`` of ``c(q)`` has ``S(x) >= 1`` and adding ``S - c(q)``
(which is principal) covers a deficit at x without creating new ones.

Positions may be :class:`~tropws.param.Lin` values; the engine only adds,
subtracts and compares them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .divisor import Divisor
from .graph import Direction, MetricGraph, Point
from .plfunction import PLFunction

DEFAULT_BUDGET = 200_000


class ReductionBudgetExceeded(RuntimeError):
    pass


class Config:
    """Mutable chip configuration aimed at a target point.

    ``target`` is ``("v", i)`` or ``("e", j, pos)``. Interior chips live in
    ``edge_chips[j]`` as ``[pos, count, is_target]`` entries sorted by
    position; the target always has an entry on its edge.
    """

    __slots__ = ("G", "target", "vchips", "edge_chips")

    def __init__(self, G: MetricGraph, target):
        self.G = G
        self.target = target
        self.vchips = [0] * len(G.vertices)
        self.edge_chips: list[list[list]] = [[] for _ in G.edges]
        if target[0] == "e":
            self.edge_chips[target[1]].append([target[2], 0, True])

    def copy(self) -> "Config":
        c = object.__new__(Config)
        c.G = self.G
        c.target = self.target
        c.vchips = list(self.vchips)
        c.edge_chips = [[list(x) for x in lst] for lst in self.edge_chips]
        return c

    def add(self, where, k: int) -> None:
        if where[0] == "v":
            self.vchips[where[1]] += k
            return
        _, j, pos = where
        lst = self.edge_chips[j]
        lo, hi = 0, len(lst)
        while lo < hi:
            mid = (lo + hi) // 2
            if lst[mid][0] < pos:
                lo = mid + 1
            else:
                hi = mid
        if lo < len(lst) and lst[lo][0] == pos:
            lst[lo][1] += k
            if lst[lo][1] == 0 and not lst[lo][2]:
                del lst[lo]
        elif k != 0:
            lst.insert(lo, [pos, k, False])

    def add_config(self, other: "Config", k: int) -> None:
        for i, c in enumerate(other.vchips):
            if c:
                self.vchips[i] += k * c
        for j, lst in enumerate(other.edge_chips):
            for pos, c, _ in lst:
                if c:
                    self.add(("e", j, pos), k * c)

    def target_count(self) -> int:
        t = self.target
        if t[0] == "v":
            return self.vchips[t[1]]
        for pos, c, is_t in self.edge_chips[t[1]]:
            if is_t:
                return c
        raise AssertionError("target entry missing")

    def deficits(self):
        """Points other than the target holding negative chips."""
        out = []
        t = self.target
        for i, c in enumerate(self.vchips):
            if c < 0 and not (t[0] == "v" and t[1] == i):
                out.append((("v", i), c))
        for j, lst in enumerate(self.edge_chips):
            for pos, c, is_t in lst:
                if c < 0 and not is_t:
                    out.append((("e", j, pos), c))
        return out

    def items(self):
        for i, c in enumerate(self.vchips):
            if c:
                yield ("v", i), c
        for j, lst in enumerate(self.edge_chips):
            for pos, c, _ in lst:
                if c:
                    yield ("e", j, pos), c


def internal_point(p: Point):
    return ("v", p.vertex) if p.is_vertex else ("e", p.edge, p.t)


def public_point(G: MetricGraph, w) -> Point:
    return Point(vertex=w[1]) if w[0] == "v" else G.point(w[1], w[2])


def config_from_divisor(G: MetricGraph, D, target) -> Config:
    cfg = Config(G, target)
    for p, k in D.items():
        cfg.add(internal_point(p), k)
    return cfg


def config_to_divisor(cfg: Config) -> Divisor:
    return Divisor({public_point(cfg.G, w): k for w, k in cfg.items()})


def _burn(cfg: Config):
    """One round of Dhar burning.

    Returns None when everything burns, else the data needed to fire the
    unburnt set: ``(nodes, seg, burnt_node, chains)``.
    """
    G = cfg.G
    nv = len(G.vertices)
    chips = list(cfg.vchips)
    pos_of: list = [None] * nv
    chains = []
    seg_a: list[int] = []
    seg_b: list[int] = []
    inc: list[list[int]] = [[] for _ in range(nv)]
    target = cfg.target
    start = target[1] if target[0] == "v" else -1
    for j, e in enumerate(G.edges):
        lst = cfg.edge_chips[j]
        chain = [e.u]
        for entry in lst:
            node = len(chips)
            chips.append(entry[1])
            pos_of.append(entry[0])
            inc.append([])
            if entry[2]:
                start = node
            chain.append(node)
        chain.append(e.v)
        chains.append(chain)
        for k in range(len(chain) - 1):
            s = len(seg_a)
            a, b = chain[k], chain[k + 1]
            seg_a.append(a)
            seg_b.append(b)
            inc[a].append(s)
            inc[b].append(s)
    n = len(chips)
    burnt = [False] * n
    seg_burnt = [False] * len(seg_a)
    heat = [0] * n
    burnt[start] = True
    stack = [start]
    left = n - 1
    while stack:
        x = stack.pop()
        for s in inc[x]:
            if seg_burnt[s]:
                continue
            seg_burnt[s] = True
            y = seg_b[s] if seg_a[s] == x else seg_a[s]
            if not burnt[y]:
                heat[y] += 1
                if heat[y] > chips[y]:
                    burnt[y] = True
                    left -= 1
                    stack.append(y)
    if left == 0:
        return None
    return chips, pos_of, chains, burnt, seg_a, seg_b, seg_burnt


def _fire(cfg: Config, burn, log: list | None) -> None:
    G = cfg.G
    chips, pos_of, chains, burnt, seg_a, seg_b, seg_burnt = burn
    nv = len(G.vertices)
    # Segment geometry per edge, and the firing distance.
    moves = []  # (edge, seg index within edge, from lower end?, length)
    delta = None
    s = 0
    for j, chain in enumerate(chains):
        length = G.edges[j].length
        for k in range(len(chain) - 1):
            a, b = chain[k], chain[k + 1]
            if seg_burnt[s] and (not burnt[a] or not burnt[b]):
                pa = Fraction(0) if k == 0 else pos_of[a]
                pb = length if k == len(chain) - 2 else pos_of[b]
                seglen = pb - pa
                up = not burnt[a]
                moves.append((j, k, up, seglen, pa, pb))
                if delta is None or seglen < delta:
                    delta = seglen
            s += 1
    assert delta is not None
    dchips = [0] * len(chips)
    inserts: dict[tuple[int, int], object] = {}
    for j, k, up, seglen, pa, pb in moves:
        chain = chains[j]
        src, dst = (chain[k], chain[k + 1]) if up else (chain[k + 1], chain[k])
        dchips[src] -= 1
        if seglen == delta:
            dchips[dst] += 1
        else:
            inserts[(j, k)] = pa + delta if up else pb - delta
    if log is not None:
        log.append(_firing_record(G, chains, pos_of, burnt, moves, delta))
    for i in range(nv):
        cfg.vchips[i] = chips[i] + dchips[i]
    for j, chain in enumerate(chains):
        old = cfg.edge_chips[j]
        new = []
        for k in range(len(chain) - 1):
            if k > 0:
                entry = old[k - 1]
                node = chain[k]
                c = chips[node] + dchips[node]
                if c != 0 or entry[2]:
                    new.append([entry[0], c, entry[2]])
            if (j, k) in inserts:
                new.append([inserts[(j, k)], 1, False])
        cfg.edge_chips[j] = new


def _firing_record(G, chains, pos_of, burnt, moves, delta):
    """The function min(delta, dist(., A)) as vertex values and edge knots."""
    nv = len(G.vertices)
    zero = Fraction(0)
    vv = [zero if not burnt[i] else delta for i in range(nv)]
    ramps = {(j, k): (up, pa, pb) for j, k, up, _, pa, pb in moves}
    knots = {}
    for j, chain in enumerate(chains):
        pts = []
        for k in range(len(chain) - 1):
            if k > 0:
                node = chain[k]
                pts.append((pos_of[node], zero if not burnt[node] else delta))
            if (j, k) in ramps:
                up, pa, pb = ramps[(j, k)]
                if pb - pa != delta:
                    pts.append((pa + delta, delta) if up else (pb - delta, delta))
        if pts:
            knots[j] = pts
    return vv, knots, delta


def stage2(cfg: Config, log: list | None = None, budget: int = DEFAULT_BUDGET) -> None:
    """Dhar loop on a configuration that is already effective off the target."""
    for _ in range(budget):
        burn = _burn(cfg)
        if burn is None:
            return
        _fire(cfg, burn, log)
    raise ReductionBudgetExceeded("reduction budget exceeded")


class Reducer:
    """Reduction toward one target point with a cache of borrowing moves."""

    def __init__(self, G: MetricGraph, target, budget: int = DEFAULT_BUDGET):
        self.G = G
        self.target = target
        self.budget = budget
        self.mult = G.genus + 1
        self._loans: dict = {}

    def loan(self, x, want_witness: bool = False):
        """``(S, log)`` with ``S`` the x-reduced form of ``(g+1)(target)``."""
        key = x
        hit = self._loans.get(key)
        if hit is not None and (hit[1] is not None or not want_witness):
            return hit
        src = Config(self.G, x)
        src.add(self.target, self.mult)
        log = [] if want_witness else None
        stage2(src, log, self.budget)
        src_count = _count_at(src, x)
        if src_count < 1:
            raise AssertionError("borrowing move failed to reach its site")
        self._loans[key] = (src, log)
        return src, log

    def run(self, cfg: Config, log: list | None = None, loans: list | None = None) -> Config:
        """Reduce ``cfg`` in place toward the target."""
        for x, c in cfg.deficits():
            src, slog = self.loan(x, want_witness=log is not None)
            got = _count_at(src, x)
            copies = -(-(-c) // got)
            cfg.add_config(src, copies)
            cfg.add(self.target, -copies * self.mult)
            if loans is not None:
                loans.append((slog, copies))
        stage2(cfg, log, self.budget)
        return cfg


def _count_at(cfg: Config, x) -> int:
    if x[0] == "v":
        return cfg.vchips[x[1]]
    for pos, c, _ in cfg.edge_chips[x[1]]:
        if pos == x[2]:
            return c
    return 0


def _log_to_function(G: MetricGraph, log) -> PLFunction:
    f = PLFunction.constant(G)
    for vv, knots, _ in log:
        f = f + PLFunction(G, vv, knots)
    return f


@dataclass(frozen=True)
class ReductionResult:
    """The q-reduced representative, its witness and the firing log."""

    G: MetricGraph
    divisor: Divisor
    q: Point
    reduced: Divisor
    witness: PLFunction | None
    firing_log: tuple = ()

    def boundary_slopes(self, p: Point) -> dict[Direction, int]:
        return boundary_slopes(self, p)


def reduce(G: MetricGraph, D: Divisor, q: Point, *, witness: bool = True, budget: int = DEFAULT_BUDGET) -> ReductionResult:
    """Return the q-reduced divisor equivalent to ``D`` with a witness."""
    target = internal_point(q)
    cfg = config_from_divisor(G, D, target)
    red = Reducer(G, target, budget)
    log = [] if witness else None
    loans = [] if witness else None
    red.run(cfg, log, loans)
    reduced = config_to_divisor(cfg)
    f = None
    trace = ()
    if witness:
        f = _log_to_function(G, log)
        for slog, copies in loans:
            f = f + _log_to_function(G, slog).scale(copies)
        trace = tuple((delta, tuple(i for i, x in enumerate(vv) if x == 0), tuple(sorted(knots))) for vv, knots, delta in log)
    return ReductionResult(G, D, q, reduced, f, trace)


def is_reduced(G: MetricGraph, D: Divisor, q: Point) -> bool:
    target = internal_point(q)
    cfg = config_from_divisor(G, D, target)
    if cfg.deficits():
        return False
    return _burn(cfg) is None


def base_point(G: MetricGraph) -> Point:
    """Lexicographically smallest vertex name."""
    name = min(G.vertices)
    return Point(vertex=G.index[name])


def rank_nonnegative(G: MetricGraph, D: Divisor) -> bool:
    if D.degree < 0:
        return False
    q0 = base_point(G)
    return reduce(G, D, q0, witness=False).reduced.coeff(q0) >= 0


def boundary_slopes(res: ReductionResult, p: Point) -> dict[Direction, int]:
    """Outgoing slopes of the witness ``f_q`` at ``p``."""
    if res.witness is None:
        raise ValueError("reduction was computed without a witness")
    return {nu: res.witness.slope(p, nu) for nu in res.G.directions(p)}
