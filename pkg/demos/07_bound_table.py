#!/usr/bin/env python3
"""Constructions, exact searches, and formula ceilings side by side.

Every cell of the grid gets the best explicit construction, the exact
clique number from the branch-and-bound search (when the product graph
fits the vertex budget), and the sharpest applicable formula ceiling.
"""

from xorkneser import bound_rows, rows_to_csv

rows = bound_rows([1, 2, 3], ns=range(2, 7), ks=[1, 2])
print(rows_to_csv(rows))

tight = [r for r in rows if r["tight?"] == "yes"]
print(f"{len(tight)} of {len(rows)} cells are tight against the ceiling")
for r in tight:
    print(f"  ell={r['ell']} n={r['n']} k={r['k']}: {r['exact_or_lb']}")
