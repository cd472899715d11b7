#!/usr/bin/env python3
"""Transversal sets and xor adjacency on tiny layouts.

Two transversals are adjacent when they are disjoint in an odd number of
blocks.  With a single block this is Kneser disjointness; with two
singleton blocks the four vertices form a 4-cycle.
"""

from xorkneser import Layout, TransversalSet, xor_adjacent, build_product_graph, max_clique

# one block: plain Kneser adjacency
lo = Layout(1, 5, 2)
a = TransversalSet.from_indices(lo, [0, 1])
b = TransversalSet.from_indices(lo, [2, 3])
c = TransversalSet.from_indices(lo, [1, 2])
print("single block, {0,1} vs {2,3}:", xor_adjacent(a, b))
print("single block, {0,1} vs {1,2}:", xor_adjacent(a, c))

# two singleton blocks: the product of two 2-vertex complete graphs
lo2 = Layout(2, 2, 1)
verts = [TransversalSet.from_indices(lo2, [i, 2 + j]) for i in range(2) for j in range(2)]
print("\nadjacency of the 4 vertices (a 4-cycle):")
for s in verts:
    row = ["-X"[xor_adjacent(s, t)] if s != t else "." for t in verts]
    print(" ", s.indices, " ".join(row))

# the same graph via the product builder, plus the Petersen graph
g = build_product_graph(2, 1, 2)
print("\nbuilder agrees: 4 vertices,", g.edge_count, "edges")

petersen = build_product_graph(5, 2, 1)
res = max_clique(petersen)
print(f"KG(5,2) is the Petersen graph: {petersen.vertex_count} vertices, "
      f"{petersen.edge_count} edges, clique number {res.size}")
