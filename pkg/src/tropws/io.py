"""JSON encodings. Every rational travels as a string ``"p/q"`` or ``"n"``."""

from __future__ import annotations

import json
from fractions import Fraction

from .divisor import Divisor, GapSequence
from .graph import MetricGraph, Point, as_rational, build_graph, fmt_rational
from .region import Region


def _rat(x) -> Fraction:
    if isinstance(x, (int, str)) and not isinstance(x, bool):
        return as_rational(x)
    raise ValueError(f"rationals must be strings like '3/2', got {x!r}")


# ---------------------------------------------------------------- graphs


def graph_to_json(G: MetricGraph) -> dict:
    return {
        "vertices": list(G.vertices),
        "edges": [{"u": G.vertices[e.u], "v": G.vertices[e.v], "len": fmt_rational(e.length)} for e in G.edges],
    }


def graph_from_json(obj: dict) -> MetricGraph:
    try:
        verts = obj["vertices"]
        edges = [(e["u"], e["v"], _rat(e["len"])) for e in obj["edges"]]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph JSON: missing {exc}") from None
    return build_graph(verts, edges)


# ---------------------------------------------------------------- points and divisors


def point_to_json(G: MetricGraph, p: Point) -> dict:
    if p.is_vertex:
        return {"vertex": G.vertices[p.vertex]}
    return {"edge": G.edge_name(p.edge), "t": fmt_rational(p.t)}


def point_from_json(G: MetricGraph, obj) -> Point:
    if isinstance(obj, str):
        return G.parse_point(obj)
    if "vertex" in obj:
        return G.vertex_point(obj["vertex"])
    if "edge" in obj and "t" in obj:
        return G.point(obj["edge"], _rat(obj["t"]))
    raise ValueError(f"malformed point {obj!r}")


def divisor_to_json(G: MetricGraph, D: Divisor) -> list:
    return [{"at": point_to_json(G, p), "c": k} for p, k in D.items()]


def divisor_from_json(G: MetricGraph, obj) -> Divisor:
    if not isinstance(obj, list):
        raise ValueError("divisor JSON must be a list of {at, c} entries")
    acc: dict[Point, int] = {}
    for item in obj:
        c = item.get("c")
        if not isinstance(c, int) or isinstance(c, bool):
            raise ValueError(f"coefficient must be an integer, got {c!r}")
        p = point_from_json(G, item["at"])
        acc[p] = acc.get(p, 0) + c
    return Divisor(acc)


def parse_divisor_text(G: MetricGraph, text: str) -> Divisor:
    """Shorthand ``"2*v + e0:1/3 - w"``; ``K`` stands for the canonical divisor."""
    from .divisor import canonical_divisor

    out = Divisor()
    s = text.replace(" ", "").replace("-", "+-")
    for term in filter(None, s.split("+")):
        sign = -1 if term.startswith("-") else 1
        term = term.lstrip("-")
        k, _, where = term.rpartition("*")
        k = int(k) if k else 1
        if where == "K":
            part = canonical_divisor(G) * (sign * k)
        else:
            part = Divisor.point(G.parse_point(where), sign * k)
        out = out + part
    return out


# ---------------------------------------------------------------- regions


def region_to_json(R: Region) -> list:
    G = R.G
    out = [{"vertex": G.vertices[v]} for v in sorted(R.vertices)]
    for j, ivs in R.intervals.items():
        out.append({"edge": G.edge_name(j), "intervals": [[fmt_rational(a), fmt_rational(b)] for a, b in ivs]})
    return out


def region_from_json(G: MetricGraph, obj) -> Region:
    items = obj if isinstance(obj, list) else [obj]
    ivs: dict[int, list] = {}
    verts = []
    for item in items:
        if "vertex" in item:
            verts.append(G.vertex_point(item["vertex"]).vertex)
        elif "edge" in item:
            j = G.edge_index(item["edge"])
            for pair in item["intervals"]:
                a, b = (_rat(x) for x in pair)
                ivs.setdefault(j, []).append((a, b))
        else:
            raise ValueError(f"malformed region item {item!r}")
    return Region(G, ivs, verts)


# ---------------------------------------------------------------- gap maps


def gap_to_json(n: GapSequence) -> list:
    return list(n)


def edge_map_to_json(G: MetricGraph, m) -> dict:
    cells = []
    for a, b, n in m.pieces():
        where = {"at": fmt_rational(a)} if a == b else {"open": [fmt_rational(a), fmt_rational(b)]}
        cells.append({**where, "gap": list(n), "wt": n.weight})
    return {
        "edge": G.edge_name(m.edge),
        "length": fmt_rational(m.length),
        "breakpoints": [fmt_rational(b) for b in m.breakpoints],
        "cells": cells,
    }


def gap_map_to_json(gm) -> dict:
    G = gm.G
    return {
        "rank": gm.r,
        "degree": gm.D.degree,
        "vertices": {G.vertices[v]: list(n) for v, n in sorted(gm.vertices.items())},
        "edges": [edge_map_to_json(G, m) for m in gm.edges],
    }


def edge_map_from_json(G: MetricGraph, obj: dict, d: int | None = None):
    from .weierstrass import EdgeGapMap

    j = G.edge_index(obj["edge"])
    cells = obj["cells"]
    vals = [GapSequence(c["gap"], d) for c in cells]
    bps = tuple(_rat(b) for b in obj["breakpoints"])
    # cells run: start, open, point, open, ..., open, end
    return EdgeGapMap(j, _rat(obj["length"]), bps, tuple(vals[2:-1:2]), tuple(vals[1::2]), vals[0], vals[-1])


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False)


__all__ = [
    "divisor_from_json",
    "divisor_to_json",
    "dumps",
    "edge_map_from_json",
    "edge_map_to_json",
    "gap_map_to_json",
    "graph_from_json",
    "graph_to_json",
    "parse_divisor_text",
    "point_from_json",
    "point_to_json",
    "region_from_json",
    "region_to_json",
]
