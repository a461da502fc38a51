"""Metric graphs with exact rational edge lengths.

A :class:`MetricGraph` is a connected loopless model of a tropical curve.
Points are addressed against this fixed model, either as a vertex or as
an (edge, offset) pair with the offset measured from the edge's ``u`` end.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


def as_rational(x) -> Fraction:
    """Coerce ``x`` to a :class:`Fraction`. Floats are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or isinstance(x, float):
        raise TypeError(f"refusing inexact value {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fmt_rational(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    length: Fraction


@dataclass(frozen=True)
class Point:
    """A location on the graph: ``Point(vertex=i)`` or ``Point(edge=j, t=offset)``.

    Build points through :meth:`MetricGraph.vertex_point` and
    :meth:`MetricGraph.point` so that offsets ``0`` and ``length`` are
    normalized to the endpoint vertices.
    """

    vertex: int | None = None
    edge: int | None = None
    t: Fraction | None = None

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def key(self):
        if self.vertex is not None:
            return (0, self.vertex, 0)
        return (1, self.edge, self.t)

    def __lt__(self, other: "Point") -> bool:
        return self.key() < other.key()


@dataclass(frozen=True)
class Direction:
    """An outgoing tangent direction at ``base``.

    ``sign`` is +1 when moving toward increasing offsets of ``edge``.
    """

    base: Point
    edge: int
    sign: int


class MetricGraph:
    """Connected loopless metric graph.

    Parameters
    ----------
    vertices : sequence of str
        Vertex ids.
    edges : sequence of (int, int, Fraction)
        Endpoint indices and lengths. Use :func:`build_graph` for
        validated construction from names.
    """

    __slots__ = ("vertices", "edges", "index", "incident", "_hash")

    def __init__(self, vertices: Sequence[str], edges: Sequence[Edge]):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.index = {name: i for i, name in enumerate(self.vertices)}
        inc: list[list[tuple[int, int]]] = [[] for _ in self.vertices]
        for j, e in enumerate(self.edges):
            inc[e.u].append((j, +1))
            inc[e.v].append((j, -1))
        self.incident = tuple(tuple(x) for x in inc)
        self._hash = hash((self.vertices, self.edges))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MetricGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"MetricGraph(|V|={len(self.vertices)}, |E|={len(self.edges)}, g={self.genus})"

    @property
    def genus(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    def edge_name(self, j: int) -> str:
        return f"e{j}"

    def edge_index(self, name: str) -> int:
        if not name.startswith("e") or not name[1:].isdigit():
            raise ValueError(f"bad edge id {name!r}")
        j = int(name[1:])
        if not 0 <= j < len(self.edges):
            raise ValueError(f"no edge {name!r}")
        return j

    def vertex_point(self, v: int | str) -> Point:
        if isinstance(v, str):
            if v not in self.index:
                raise ValueError(f"no vertex {v!r}")
            v = self.index[v]
        return Point(vertex=v)

    def point(self, edge: int | str, t) -> Point:
        if isinstance(edge, str):
            edge = self.edge_index(edge)
        e = self.edges[edge]
        t = as_rational(t)
        if t < 0 or t > e.length:
            raise ValueError(f"offset {t} outside edge e{edge} of length {e.length}")
        if t == 0:
            return Point(vertex=e.u)
        if t == e.length:
            return Point(vertex=e.v)
        return Point(edge=edge, t=t)

    def parse_point(self, text: str) -> Point:
        """Parse ``"e0:1/3"`` or a vertex id."""
        if ":" in text:
            name, t = text.split(":", 1)
            return self.point(name, t)
        return self.vertex_point(text)

    def fmt_point(self, p: Point) -> str:
        if p.is_vertex:
            return self.vertices[p.vertex]
        return f"e{p.edge}:{fmt_rational(p.t)}"

    def valence(self, p: Point) -> int:
        return len(self.incident[p.vertex]) if p.is_vertex else 2

    def directions(self, p: Point) -> list[Direction]:
        if p.is_vertex:
            return [Direction(p, j, s) for j, s in self.incident[p.vertex]]
        return [Direction(p, p.edge, +1), Direction(p, p.edge, -1)]

    def position(self, p: Point, edge: int) -> Fraction:
        """Offset of ``p`` on ``edge``; ``p`` must lie on the closed edge."""
        e = self.edges[edge]
        if p.is_vertex:
            if p.vertex == e.u:
                return Fraction(0)
            if p.vertex == e.v:
                return e.length
            raise ValueError("point not on edge")
        if p.edge != edge:
            raise ValueError("point not on edge")
        return p.t

    def total_length(self) -> Fraction:
        return sum((e.length for e in self.edges), Fraction(0))

    def is_bridge(self, j: int) -> bool:
        return not _connected(len(self.vertices), [e for i, e in enumerate(self.edges) if i != j])

    def lcm_denominator(self, extra: Iterable[Fraction] = ()) -> int:
        from math import lcm

        den = 1
        for e in self.edges:
            den = lcm(den, e.length.denominator)
        for x in extra:
            den = lcm(den, as_rational(x).denominator)
        return den


def _connected(n: int, edges: Iterable[Edge]) -> bool:
    adj: list[list[int]] = [[] for _ in range(n)]
    for e in edges:
        adj[e.u].append(e.v)
        adj[e.v].append(e.u)
    seen = [False] * n
    if n == 0:
        return True
    seen[0] = True
    todo = deque([0])
    while todo:
        x = todo.popleft()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                todo.append(y)
    return all(seen)


def build_graph(vertices: Sequence[str], edges: Sequence[tuple]) -> MetricGraph:
    """Build a validated graph from vertex names and ``(u, v, length)`` triples.

    Loops are split by a fresh midpoint vertex; parallel edges are kept.
    """
    names = [str(v) for v in vertices]
    if len(set(names)) != len(names):
        raise ValueError("duplicate vertex id")
    if not edges:
        raise ValueError("graph needs at least one edge")
    index = {v: i for i, v in enumerate(names)}
    out: list[Edge] = []
    for raw in edges:
        u, v, length = raw
        length = as_rational(length)
        if length <= 0:
            raise ValueError(f"edge {u}-{v} has nonpositive length {length}")
        for x in (u, v):
            if str(x) not in index:
                raise ValueError(f"edge endpoint {x!r} is not a vertex")
        iu, iv = index[str(u)], index[str(v)]
        if iu == iv:
            k = 0
            while f"{u}~{k}" in index:
                k += 1
            mid = f"{u}~{k}"
            index[mid] = len(names)
            names.append(mid)
            half = length / 2
            out.append(Edge(iu, index[mid], half))
            out.append(Edge(index[mid], iu, half))
        else:
            out.append(Edge(iu, iv, length))
    if not _connected(len(names), out):
        raise ValueError("graph not connected")
    return MetricGraph(names, out)


def cycle_rank(G: MetricGraph) -> int:
    """Number of co-tree edges of a BFS spanning tree (independent genus count)."""
    n = len(G.vertices)
    seen = [False] * n
    seen[0] = True
    tree = 0
    todo = deque([0])
    while todo:
        x = todo.popleft()
        for j, _ in G.incident[x]:
            e = G.edges[j]
            y = e.v if e.u == x else e.u
            if not seen[y]:
                seen[y] = True
                tree += 1
                todo.append(y)
    return len(G.edges) - tree


def refine(G: MetricGraph, points: Iterable[Point]):
    """Subdivide ``G`` at the given interior points.

    Returns ``(H, translate)`` where ``translate`` maps points of ``G`` to
    points of ``H``. ``G`` is left untouched.
    """
    cuts: dict[int, set[Fraction]] = {}
    for p in points:
        if not p.is_vertex:
            cuts.setdefault(p.edge, set()).add(p.t)
    names = list(G.vertices)
    new_edges: list[Edge] = []
    pieces: dict[int, list[tuple[Fraction, Fraction, int]]] = {}
    cut_vertex: dict[tuple[int, Fraction], int] = {}
    for j, e in enumerate(G.edges):
        ts = sorted(cuts.get(j, ()))
        chain = [e.u]
        for k, t in enumerate(ts):
            name = f"e{j}@{fmt_rational(t)}"
            cut_vertex[(j, t)] = len(names)
            chain.append(len(names))
            names.append(name)
        chain.append(e.v)
        offs = [Fraction(0), *ts, e.length]
        pieces[j] = []
        for k in range(len(chain) - 1):
            pieces[j].append((offs[k], offs[k + 1], len(new_edges)))
            new_edges.append(Edge(chain[k], chain[k + 1], offs[k + 1] - offs[k]))
    H = MetricGraph(names, new_edges)

    def translate(p: Point) -> Point:
        if p.is_vertex:
            return Point(vertex=p.vertex)
        if (p.edge, p.t) in cut_vertex:
            return Point(vertex=cut_vertex[(p.edge, p.t)])
        for a, b, k in pieces[p.edge]:
            if a < p.t < b:
                return Point(edge=k, t=p.t - a)
        raise AssertionError("unreachable")

    return H, translate
