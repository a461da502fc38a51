"""Gap sequences along one edge of the unit dipoles B3 and B4.

Prints the edge table, the Weierstrass locus and its maximal pieces with
their weights and mu values.

    python3 demos/dipole_tables.py
"""

from tropws import catalog
from tropws.divisor import canonical_divisor
from tropws.tables import render_edge_table
from tropws.weierstrass import maximal_loci, sweep, verify_totals, wl


def show(g: int) -> None:
    G = catalog.dipole(g).graph
    K = canonical_divisor(G)
    gm = sweep(G, K)
    print(f"== B{g}: {len(G.edges)} edges of length 1, K = {K.fmt(G)}")
    print(render_edge_table(G, K, gm.edges[0], gm.r))
    print("WL(K) =", wl(G, K, gm).describe())
    for L in maximal_loci(G, K, gm, with_mu=True):
        print(f"  {L.region.describe():<14} {L.gap} wt={L.weight} mu={L.mu}")
    for line in verify_totals(G, K, gm).lines:
        print(" ", line)
    print()


if __name__ == "__main__":
    for g in (3, 4):
        show(g)
