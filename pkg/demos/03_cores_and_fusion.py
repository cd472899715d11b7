#!/usr/bin/env python3
"""Cores, fusion, and the k=1 families they generate.

An ell-core is a system of ell sets B_i, each of size ell-1, avoiding its
own block, meeting every other block once, with |B_i & B_j| + ell always
odd.  Fusing a p-core with a q-core yields a (p+q-1)-core, and iterating
from the explicit 3/4/5-cores keeps the universe below 2*ell + 2.
"""

from xorkneser import (
    build_core,
    core3,
    core5,
    core_is_valid,
    core_to_family,
    fuse,
    verify_family,
)

for name, core in [("3-core", core3()), ("5-core", core5())]:
    print(f"{name}: classes {core.class_sizes}, universe {core.universe_size}, "
          f"valid={core_is_valid(core)}")
    for i, b in enumerate(core.sets, start=1):
        print(f"  B_{i} = {sorted(b)}")

fused = fuse(core3(), core3())
print(f"\nfuse(3-core, 3-core): a {fused.ell}-core of type {fused.class_sizes}, "
      f"universe {fused.universe_size}")

print("\nuniverse size against the 2*ell+1 budget:")
for ell in range(3, 31, 3):
    core = build_core(ell)
    print(f"  ell={ell:2d}: |U| = {core.universe_size:2d} <= {2 * ell + 1}")

ell = 9
core = build_core(ell)
fam = core_to_family(core, [5] * ell)
print(f"\nfamily from the {ell}-core with all blocks of size 5: "
      f"{len(fam)} members (= 5*{ell} - {core.universe_size}), "
      f"valid={verify_family(fam).valid}")
