#!/usr/bin/env python3
"""Polynomial growth in n for many blocks.

The matrix construction partitions each of ell = 2**t - 1 blocks into m =
floor(n/k) segments and cells, and one member per function [t] -> [m]
gives m**t members.  Appending a block with a fixed k-set never breaks
validity, so the families lift to any larger ell.
"""

from xorkneser import (
    extend_power,
    matrix_family,
    matrix_plan,
    power_lower,
    power_upper,
    verify_family,
)

plan = matrix_plan(k=3, t=2)
print("plan for k=3, t=2 (rows: used columns / cell sizes):")
for hrow, crow in zip(plan.h, plan.c):
    print("  ", hrow, crow)

for (n, k, t) in [(4, 2, 2), (9, 3, 2), (6, 3, 3)]:
    fam = matrix_family(n, k, t)
    ell = 2**t - 1
    print(f"\nn={n} k={k} t={t}: ell={ell}, size {len(fam)} = floor(n/k)**t, "
          f"valid={verify_family(fam).valid}")
    print(f"  formula floor: {power_lower(n, k, ell)},  chain ceiling: {power_upper(n, k, ell)}")

fam = matrix_family(9, 3, 2)
lifted = extend_power(fam, [0, 1, 2])
print(f"\nlifting ell={fam.layout.ell} -> {lifted.layout.ell}: size stays {len(lifted)}, "
      f"valid={verify_family(lifted).valid}")
