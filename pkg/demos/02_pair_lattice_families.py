#!/usr/bin/env python3
"""The two-block pair/lattice construction.

Complementary k-set labels H_i / G_i live on a 2k-point set inside block
A.  Each k x k lattice in block B pairs its rows with H_i and its columns
with G_i, and the leftover disjoint k-sets of B attach to H_1.  The result
has exactly floor(n/k) + k*C(2k,k)/2 - k members.
"""

from math import comb

from xorkneser import construct_f2_lower, degree, encode, verify_family

for n, k in [(8, 2), (20, 2), (40, 2), (81, 3)]:
    fam = construct_f2_lower(n, k)
    report = verify_family(fam)
    formula = n // k + comb(2 * k, k) * k // 2 - k
    print(f"n={n:3d} k={k}: size {len(fam):3d} (= {formula}), valid={report.valid}")

fam = construct_f2_lower(8, 2)
print("\nthe n=8, k=2 family, one member per line (global indices):")
print(encode(fam))

print("degrees of the four labelled points of block A:")
for e in range(4):
    print(f"  element {e}: degree {degree(fam, e)}")

# below the lattice-packing threshold the construction refuses
try:
    construct_f2_lower(7, 2)
except ValueError as exc:
    print("\nn=7 rejected:", exc)
