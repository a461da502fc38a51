"""Closed regions of a metric graph: finite unions of closed intervals and vertices."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

from .graph import Direction, MetricGraph, Point, as_rational


class Region:
    """A closed subset of the graph stored in normal form.

    ``intervals`` maps an edge index to sorted, pairwise disjoint closed
    intervals ``(a, b)`` with ``a <= b``; ``vertices`` is the set of vertex
    indices in the region. Any interval touching an edge end puts that
    vertex in ``vertices``; degenerate intervals sitting on a vertex are
    dropped in favour of the vertex.
    """

    __slots__ = ("G", "intervals", "vertices")

    def __init__(
        self,
        G: MetricGraph,
        intervals: Mapping[int, Iterable[tuple]] | None = None,
        vertices: Iterable[int] = (),
    ):
        self.G = G
        verts = set(vertices)
        norm: dict[int, tuple[tuple[Fraction, Fraction], ...]] = {}
        for j, ivs in (intervals or {}).items():
            length = G.edges[j].length
            spans = []
            for a, b in ivs:
                a, b = as_rational(a), as_rational(b)
                if not 0 <= a <= b <= length:
                    raise ValueError(f"interval [{a}, {b}] not inside edge e{j}")
                spans.append((a, b))
            spans.sort()
            merged: list[list[Fraction]] = []
            for a, b in spans:
                if merged and a <= merged[-1][1]:
                    merged[-1][1] = max(merged[-1][1], b)
                else:
                    merged.append([a, b])
            kept = []
            for a, b in merged:
                if a == 0:
                    verts.add(G.edges[j].u)
                if b == length:
                    verts.add(G.edges[j].v)
                if a == b and (a == 0 or a == length):
                    continue
                kept.append((a, b))
            if kept:
                norm[j] = tuple(kept)
        self.intervals = dict(sorted(norm.items()))
        self.vertices = frozenset(verts)

    @classmethod
    def from_points(cls, G: MetricGraph, points: Iterable[Point]) -> "Region":
        ivs: dict[int, list] = {}
        verts = []
        for p in points:
            if p.is_vertex:
                verts.append(p.vertex)
            else:
                ivs.setdefault(p.edge, []).append((p.t, p.t))
        return cls(G, ivs, verts)

    @classmethod
    def whole(cls, G: MetricGraph) -> "Region":
        return cls(G, {j: [(0, e.length)] for j, e in enumerate(G.edges)})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Region)
            and self.G == other.G
            and self.intervals == other.intervals
            and self.vertices == other.vertices
        )

    def __hash__(self) -> int:
        return hash((tuple(self.intervals.items()), self.vertices))

    def __repr__(self) -> str:
        return f"Region({self.describe()})"

    def describe(self) -> str:
        from .graph import fmt_rational as f

        parts = [self.G.vertices[v] for v in sorted(self.vertices)]
        for j, ivs in self.intervals.items():
            for a, b in ivs:
                parts.append(f"e{j}:{{{f(a)}}}" if a == b else f"e{j}:[{f(a)},{f(b)}]")
        return ", ".join(parts) if parts else "empty"

    def is_empty(self) -> bool:
        return not self.vertices and not self.intervals

    def contains(self, p: Point) -> bool:
        if p.is_vertex:
            return p.vertex in self.vertices
        return any(a <= p.t <= b for a, b in self.intervals.get(p.edge, ()))

    def union(self, other: "Region") -> "Region":
        ivs: dict[int, list] = {}
        for src in (self, other):
            for j, spans in src.intervals.items():
                ivs.setdefault(j, []).extend(spans)
        return Region(self.G, ivs, self.vertices | other.vertices)

    def intersection(self, other: "Region") -> "Region":
        ivs: dict[int, list] = {}
        for j in range(len(self.G.edges)):
            mine = self._edge_spans(j)
            theirs = other._edge_spans(j)
            out = []
            for a, b in mine:
                for c, d in theirs:
                    lo, hi = max(a, c), min(b, d)
                    if lo <= hi:
                        out.append((lo, hi))
            if out:
                ivs[j] = out
        return Region(self.G, ivs, self.vertices & other.vertices)

    def _edge_spans(self, j: int) -> list[tuple[Fraction, Fraction]]:
        """Closed pieces of the region on edge ``j`` including endpoint vertices."""
        e = self.G.edges[j]
        spans = list(self.intervals.get(j, ()))
        if e.u in self.vertices:
            spans.append((Fraction(0), Fraction(0)))
        if e.v in self.vertices:
            spans.append((e.length, e.length))
        return spans

    # -- combinatorics -------------------------------------------------

    def _nodes_and_arcs(self):
        """Region viewed as a graph: nodes are vertices and interior interval ends."""
        G = self.G
        nodes: dict[tuple, int] = {}

        def node(key):
            if key not in nodes:
                nodes[key] = len(nodes)
            return nodes[key]

        for v in sorted(self.vertices):
            node(("v", v))
        arcs = []
        for j, ivs in self.intervals.items():
            e = G.edges[j]
            for a, b in ivs:
                ka = ("v", e.u) if a == 0 else ("e", j, a)
                kb = ("v", e.v) if b == e.length else ("e", j, b)
                na, nb = node(ka), node(kb)
                if a < b:
                    arcs.append((na, nb))
        return nodes, arcs

    def _components_raw(self):
        nodes, arcs = self._nodes_and_arcs()
        parent = list(range(len(nodes)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in arcs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        return nodes, arcs, find

    @property
    def component_count(self) -> int:
        nodes, _, find = self._components_raw()
        return len({find(i) for i in range(len(nodes))})

    @property
    def genus(self) -> int:
        nodes, arcs, _ = self._components_raw()
        return len(arcs) - len(nodes) + self.component_count

    def components(self) -> list["Region"]:
        nodes, _, find = self._components_raw()
        groups: dict[int, tuple[dict, list]] = {}
        for key, i in nodes.items():
            groups.setdefault(find(i), ({}, []))
        for key, i in nodes.items():
            if key[0] == "v":
                groups[find(i)][1].append(key[1])
        G = self.G
        for j, ivs in self.intervals.items():
            e = G.edges[j]
            for a, b in ivs:
                ka = ("v", e.u) if a == 0 else ("e", j, a)
                groups[find(nodes[ka])][0].setdefault(j, []).append((a, b))
        comps = [Region(G, ivs, vs) for ivs, vs in groups.values()]
        comps.sort(key=lambda R: R._sort_key())
        return comps

    def _sort_key(self):
        first_v = min(self.vertices) if self.vertices else len(self.G.vertices)
        first_e = min(self.intervals.items(), default=(len(self.G.edges), ((0, 0),)))
        return (first_e[0], first_e[1][0], first_v)

    def boundary(self) -> list[tuple[Point, list[Direction]]]:
        """Points of the region with their outgoing directions (leaving the region)."""
        G = self.G
        out: list[tuple[Point, list[Direction]]] = []
        for v in sorted(self.vertices):
            p = Point(vertex=v)
            dirs = []
            for j, s in G.incident[v]:
                e = G.edges[j]
                ivs = self.intervals.get(j, ())
                if s > 0:
                    inside = any(a == 0 and b > 0 for a, b in ivs)
                else:
                    inside = any(b == e.length and a < e.length for a, b in ivs)
                if not inside:
                    dirs.append(Direction(p, j, s))
            if dirs:
                out.append((p, dirs))
        for j, ivs in self.intervals.items():
            e = G.edges[j]
            for a, b in ivs:
                if a == b:
                    p = Point(edge=j, t=a)
                    out.append((p, [Direction(p, j, +1), Direction(p, j, -1)]))
                    continue
                if a > 0:
                    p = Point(edge=j, t=a)
                    out.append((p, [Direction(p, j, -1)]))
                if b < e.length:
                    p = Point(edge=j, t=b)
                    out.append((p, [Direction(p, j, +1)]))
        return out

    def outdeg(self, p: Point) -> int:
        for q, dirs in self.boundary():
            if q == p:
                return len(dirs)
        return 0
