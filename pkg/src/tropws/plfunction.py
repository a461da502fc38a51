"""Piecewise-linear functions with integer slopes on a metric graph."""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from fractions import Fraction
from typing import Mapping, Sequence

from .divisor import Divisor
from .graph import Direction, MetricGraph, Point


class PLFunction:
    """Continuous function, affine between knots, with integer slopes.

    Parameters
    ----------
    G : MetricGraph
    vertex_values : sequence of Fraction
        Value at every model vertex.
    knots : mapping edge index -> sequence of (offset, value)
        Interior breakpoints, ``0 < offset < length``. Edges without knots
        are affine between their endpoint values.
    """

    __slots__ = ("G", "vv", "knots")

    def __init__(self, G: MetricGraph, vertex_values: Sequence, knots: Mapping | None = None):
        self.G = G
        self.vv = tuple(Fraction(x) for x in vertex_values)
        if len(self.vv) != len(G.vertices):
            raise ValueError("need one value per vertex")
        ks: dict[int, tuple] = {}
        for j, pts in (knots or {}).items():
            pts = sorted((Fraction(t), Fraction(v)) for t, v in pts)
            if pts:
                ks[j] = tuple(pts)
        self.knots = ks
        self._check_slopes()

    @classmethod
    def constant(cls, G: MetricGraph, c=0) -> "PLFunction":
        return cls(G, [c] * len(G.vertices))

    def _profile(self, j: int) -> list[tuple[Fraction, Fraction]]:
        e = self.G.edges[j]
        return [(Fraction(0), self.vv[e.u]), *self.knots.get(j, ()), (e.length, self.vv[e.v])]

    def _check_slopes(self) -> None:
        for j in range(len(self.G.edges)):
            prof = self._profile(j)
            for (a, fa), (b, fb) in zip(prof, prof[1:]):
                if not a < b:
                    raise ValueError(f"knots on e{j} not strictly inside the edge")
                s = (fb - fa) / (b - a)
                if s.denominator != 1:
                    raise ValueError(f"non-integer slope {s} on e{j}")

    def value(self, p: Point) -> Fraction:
        if p.is_vertex:
            return self.vv[p.vertex]
        prof = self._profile(p.edge)
        xs = [x for x, _ in prof]
        k = bisect_left(xs, p.t)
        if xs[k] == p.t:
            return prof[k][1]
        (a, fa), (b, fb) = prof[k - 1], prof[k]
        return fa + (fb - fa) * (p.t - a) / (b - a)

    def slope(self, p: Point, nu: Direction) -> int:
        """Outgoing slope of the function at ``p`` along ``nu``."""
        j = nu.edge
        x = self.G.position(p, j)
        prof = self._profile(j)
        xs = [t for t, _ in prof]
        fx = self.value(p)
        if nu.sign > 0:
            k = bisect_left(xs, x)
            if xs[k] == x:
                k += 1
            b, fb = prof[k]
            s = (fb - fx) / (b - x)
        else:
            k = bisect_left(xs, x) - 1
            a, fa = prof[k]
            s = (fa - fx) / (x - a)
        return int(s)

    def div(self) -> Divisor:
        G = self.G
        c: dict[Point, int] = {}
        for i in range(len(G.vertices)):
            p = Point(vertex=i)
            c[p] = -sum(self.slope(p, nu) for nu in G.directions(p))
        for j, pts in self.knots.items():
            prof = self._profile(j)
            for k in range(1, len(prof) - 1):
                (a, fa), (x, fx), (b, fb) = prof[k - 1], prof[k], prof[k + 1]
                left = (fx - fa) / (x - a)
                right = (fb - fx) / (b - x)
                c[Point(edge=j, t=x)] = int(left - right)
        return Divisor(c)

    def _combine(self, other: "PLFunction", op) -> "PLFunction":
        if other.G != self.G:
            raise ValueError("functions live on different graphs")
        vv = [op(a, b) for a, b in zip(self.vv, other.vv)]
        knots = {}
        for j in set(self.knots) | set(other.knots):
            ts = sorted({t for t, _ in self.knots.get(j, ())} | {t for t, _ in other.knots.get(j, ())})
            knots[j] = [
                (t, op(self.value(Point(edge=j, t=t)), other.value(Point(edge=j, t=t)))) for t in ts
            ]
        return PLFunction(self.G, vv, knots).simplified()

    def __add__(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "PLFunction":
        return self.scale(-1)

    def scale(self, n: int) -> "PLFunction":
        return PLFunction(
            self.G,
            [n * x for x in self.vv],
            {j: [(t, n * v) for t, v in pts] for j, pts in self.knots.items()},
        ).simplified()

    def shift(self, c) -> "PLFunction":
        c = Fraction(c)
        return PLFunction(
            self.G, [x + c for x in self.vv], {j: [(t, v + c) for t, v in pts] for j, pts in self.knots.items()}
        )

    def simplified(self) -> "PLFunction":
        """Drop knots where the slope does not change."""
        knots = {}
        for j in self.knots:
            prof = self._profile(j)
            keep = []
            for k in range(1, len(prof) - 1):
                (a, fa), (x, fx), (b, fb) = prof[k - 1], prof[k], prof[k + 1]
                if (fx - fa) / (x - a) != (fb - fx) / (b - x):
                    keep.append(prof[k])
            if keep:
                knots[j] = keep
        out = object.__new__(PLFunction)
        out.G, out.vv, out.knots = self.G, self.vv, knots
        return out

    def is_constant(self) -> bool:
        return not self.simplified().knots and len(set(self.vv)) <= 1

    def export(self) -> dict:
        """Debug view: every refinement vertex with its value."""
        from .graph import fmt_rational as f

        G = self.G
        rows = [{"at": G.vertices[i], "value": f(x)} for i, x in enumerate(self.vv)]
        for j, pts in self.knots.items():
            rows.extend({"at": f"e{j}:{f(t)}", "value": f(v)} for t, v in pts)
        return {"values": rows}


def _side_of(G: MetricGraph, j: int, start: int) -> set[int]:
    """Vertices reachable from ``start`` without crossing edge ``j``."""
    seen = {start}
    todo = deque([start])
    while todo:
        x = todo.popleft()
        for k, _ in G.incident[x]:
            if k == j:
                continue
            e = G.edges[k]
            y = e.v if e.u == x else e.u
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def ramp(G: MetricGraph, j: int, a: Fraction, b: Fraction) -> PLFunction:
    """Slope-one ramp along ``[a, b]`` on bridge ``j``, moving from offset a to b.

    Constant on both sides of the segment; its divisor is ``(b) - (a)``.
    """
    if not G.is_bridge(j):
        raise ValueError(f"e{j} is not a bridge; a single-chip move across it is not principal")
    e = G.edges[j]
    lo, hi = min(a, b), max(a, b)
    size = hi - lo
    u_side = _side_of(G, j, e.u)
    # value 0 on the side we leave, `size` on the side we reach
    u_val, v_val = (Fraction(0), size) if a < b else (size, Fraction(0))
    vv = [u_val if i in u_side else v_val for i in range(len(G.vertices))]
    knots = []
    if 0 < lo:
        knots.append((lo, u_val))
    if hi < e.length:
        knots.append((hi, v_val))
    return PLFunction(G, vv, {j: knots})


def transport(G: MetricGraph, x: Point, y: Point, path: Sequence[int]) -> PLFunction:
    """Function moving one chip from ``x`` to ``y`` along ``path``.

    ``path`` lists the edges traversed in order. Each must be a bridge:
    off a bridge the divisor ``(y) - (x)`` is not principal. The result
    has slope +1 at ``x`` along the path and ``div = (y) - (x)``.
    """
    f = PLFunction.constant(G)
    if x == y:
        return f
    if not path:
        raise ValueError("empty path between distinct points")
    cur = x
    for n, j in enumerate(path):
        e = G.edges[j]
        a = G.position(cur, j)
        last = n == len(path) - 1
        if last:
            b = G.position(y, j)
        else:
            nxt = G.edges[path[n + 1]]
            shared = {e.u, e.v} & {nxt.u, nxt.v}
            if not shared:
                raise ValueError("path edges are not consecutive")
            end = next(iter(shared))
            if cur.is_vertex and cur.vertex == end and len(shared) == 1:
                raise ValueError("path doubles back")
            b = Fraction(0) if end == e.u else e.length
        if a != b:
            f = f + ramp(G, j, a, b)
        cur = G.point(j, b)
    return f
