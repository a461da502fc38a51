"""Reducing a few divisors on B3 and reading ranks off the result.

    python3 demos/reduction_walkthrough.py
"""

from fractions import Fraction

from tropws import catalog
from tropws.divisor import Divisor
from tropws.rank import rank_with_witness
from tropws.reduction import reduce

G = catalog.dipole(3).graph
v, w = G.vertex_point("v"), G.vertex_point("v'")
mid = G.point(0, Fraction(1, 2))


def walk(label: str, D: Divisor, q) -> None:
    res = reduce(G, D, q)
    print(f"{label}: D = {D.fmt(G)}")
    for delta, verts, edges in res.firing_log:
        fired = ", ".join(G.vertices[i] for i in verts) or "-"
        moved = ", ".join(G.edge_name(j) for j in edges) or "-"
        print(f"  fire by {delta}: vertices {{{fired}}}, partial edges {{{moved}}}")
    print(f"  {G.fmt_point(q)}-reduced: {res.reduced.fmt(G)}")
    assert D + res.witness.div() == res.reduced
    if res.firing_log:
        sl = res.boundary_slopes(q)
        print("  slopes of f_q leaving q:", " ".join(f"{G.edge_name(nu.edge)}:{s}" for nu, s in sl.items()))
    rr = rank_with_witness(G, D)
    extra = f", witness E = {rr.witness.fmt(G)}" if rr.witness is not None and rr.rank < D.degree else ""
    print(f"  rank {rr.rank} ({rr.method}){extra}")
    print()


if __name__ == "__main__":
    # four chips at the far vertex flow back in one firing
    walk("far vertex", Divisor.point(w, 4), v)
    # two chips at a midpoint split to the two vertices; the pair moves freely
    walk("midpoint pair", Divisor.point(mid, 2), v)
    # 2(v) is not a pencil: the involution fixes midpoints, not vertices
    walk("double vertex", Divisor.point(v, 2), v)
    # a debt away from q is paid off by chips elsewhere
    walk("debt", Divisor.point(v) + Divisor.point(w) - Divisor.point(mid), v)
