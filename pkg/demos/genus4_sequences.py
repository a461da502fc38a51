"""Which canonical gap sequences turn up in genus 4.

Runs the witness set, prints the point on B4 whose sequence has a
non-semigroup complement, then samples random genus-4 graphs looking for
(1,2,5,7) or (1,2,6,7). Takes a few minutes.

    python3 demos/genus4_sequences.py [samples]
"""

import sys

from tropws import catalog
from tropws.divisor import canonical_divisor
from tropws.rank import gap_sequence
from tropws.weierstrass import semigroup_check

if __name__ == "__main__":
    samples = int(sys.argv[1]) if len(sys.argv) > 1 else 30
    got = catalog.classify(4)
    for n in sorted(got):
        tag = "" if semigroup_check(n, 4) else "  complement not a semigroup"
        print(f"{n} wt={n.weight}{tag}")

    fam, p = catalog.remark_point(4)
    n = gap_sequence(fam.graph, canonical_divisor(fam.graph), p)
    print(f"\nunit {fam.name} of genus 4 at {fam.graph.fmt_point(p)}: {n}")

    rep = catalog.exclusion_probe(samples=samples, seed=0)
    print(f"\n{rep.instances} random instances, hits: {rep.hits or 'none'}")
