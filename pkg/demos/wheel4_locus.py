"""The unit wheel of genus 4 and its canonical Weierstrass locus.

The locus here has a component of positive length, so the isolated-point
count g^2 - 1 = 15 does not apply. The mu total still comes out right.

    python3 demos/wheel4_locus.py
"""

from tropws import catalog
from tropws.divisor import canonical_divisor
from tropws.weierstrass import maximal_loci, mu, sweep, verify_totals, wl

if __name__ == "__main__":
    for g in (3, 4):
        G = catalog.wheel(g).graph
        K = canonical_divisor(G)
        gm = sweep(G, K)
        W = wl(G, K, gm)
        print(f"== wheel, genus {g}")
        for A in W.components():
            print(f"  component {A.describe()}: mu = {mu(G, K, A)}")
        for L in maximal_loci(G, K, gm):
            print(f"  maximal {L.region.describe()}: {L.gap} wt={L.weight}")
        rep = verify_totals(G, K, gm)
        print("  finite:", rep.data["finite"])
        for line in rep.lines:
            print(" ", line)
        print()
