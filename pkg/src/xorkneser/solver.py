"""Exact clique oracle for xor-products of Kneser graphs.

Builds the dense product graph, runs a deterministic branch-and-bound
maximum clique search with a greedy-coloring bound, and provides GF(2)
rank checks for the algebraic ceiling on k=1 families.  Sized for desk
scale: every structure is dense and exact, nothing is approximated.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .setsystem import Family, Layout, TransversalSet, bit_indices

DEFAULT_NODE_BUDGET = 10**8
DEFAULT_VERTEX_BUDGET = 2 * 10**5


class VertexBudgetExceeded(RuntimeError):
    """Product graph would exceed the configured vertex budget."""

    def __init__(self, required: int, budget: int):
        self.required = required
        self.budget = budget
        super().__init__(
            f"product graph needs {required} vertices, over the budget of {budget}; "
            f"raise the budget to at least {required} to build it"
        )


@dataclass(frozen=True)
class CliqueGraph:
    """Dense undirected graph; row u of adj has bit v set iff uv is an edge."""

    adj: tuple[int, ...]
    labels: tuple[TransversalSet, ...] | None = None

    @property
    def vertex_count(self) -> int:
        return len(self.adj)

    @property
    def edge_count(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def validate(self) -> None:
        for u, row in enumerate(self.adj):
            if row >> u & 1:
                raise ValueError(f"self-loop at vertex {u}")
            for v in bit_indices(row):
                if not self.adj[v] >> u & 1:
                    raise ValueError(f"adjacency not symmetric at ({u}, {v})")


@dataclass(frozen=True)
class CliqueResult:
    size: int
    witness: tuple[int, ...]
    status: str  # "exact" | "lower-bound-only"
    nodes_explored: int


def colex_ksubsets(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-subsets of range(n) in colexicographic order."""
    return sorted(combinations(range(n), k), key=lambda c: c[::-1])


def build_product_graph(
    n: int,
    k: int,
    ell: int,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    with_labels: bool = True,
) -> CliqueGraph:
    """Graph of all transversal sets under xor adjacency.

    Vertex v encodes one k-subset per block; per-block subsets are ranked
    in colexicographic order and v = sum(rank_i * C(n,k)**(ell-1-i)), so
    indices are reproducible across runs.
    """
    layout = Layout(ell, n, k)
    c = comb(n, k)
    v_count = c**ell
    if v_count > vertex_budget:
        raise VertexBudgetExceeded(required=v_count, budget=vertex_budget)
    subs = colex_ksubsets(n, k)
    sub_bits = [sum(1 << e for e in s) for s in subs]

    # per-block disjointness table for pairs of k-subsets
    if n <= 62:
        m = np.array(sub_bits, dtype=np.uint64)
        dis = (m[:, None] & m[None, :]) == 0
    else:
        dis = np.zeros((c, c), dtype=bool)
        fsets = [frozenset(s) for s in subs]
        for a in range(c):
            dis[a] = [fsets[a].isdisjoint(b) for b in fsets]

    idx = np.arange(v_count)
    ranks = [(idx // c ** (ell - 1 - i)) % c for i in range(ell)]

    adj_rows: list[int] = []
    chunk = max(1, (1 << 24) // max(v_count, 1))
    for start in range(0, v_count, chunk):
        stop = min(v_count, start + chunk)
        parity = np.zeros((stop - start, v_count), dtype=bool)
        for i in range(ell):
            ri = ranks[i]
            parity ^= dis[np.ix_(ri[start:stop], ri)]
        packed = np.packbits(parity, axis=1, bitorder="little")
        for row in packed:
            adj_rows.append(int.from_bytes(row.tobytes(), "little"))

    labels = None
    if with_labels:
        labels = tuple(
            TransversalSet(
                layout,
                sum(sub_bits[int(ranks[i][v])] << (i * n) for i in range(ell)),
            )
            for v in range(v_count)
        )
    return CliqueGraph(tuple(adj_rows), labels)


def _search(radj: list[int], cand0: int, budget: int) -> tuple[int, int, int, bool]:
    """Bounded max-clique search over a reindexed adjacency list.

    Returns (best_size, best_mask, nodes, exceeded).  Candidates are
    colored greedily in static bit order; the candidate list is sorted so
    the vertex of maximum color comes last and is branched on first,
    pruning as soon as |clique| + color can no longer beat the incumbent.
    """
    best_size = 0
    best_mask = 0
    nodes = 0
    exceeded = False

    def color_order(cand: int) -> list[tuple[int, int]]:
        out = []
        rest = cand
        color = 0
        while rest:
            color += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                out.append((v, color))
                rest ^= low
                avail = (avail ^ low) & ~radj[v]
        return out

    def expand(r_size: int, r_mask: int, cand: int) -> None:
        nonlocal best_size, best_mask, nodes, exceeded
        nodes += 1
        if nodes > budget:
            exceeded = True
            return
        if not cand:
            if r_size > best_size:
                best_size, best_mask = r_size, r_mask
            return
        if r_size + cand.bit_count() <= best_size:
            # popcount dominates the color count, so the first color check
            # below would prune anyway; skip the coloring work
            return
        for v, color in reversed(color_order(cand)):
            if exceeded:
                return
            if r_size + color <= best_size:
                return
            bit = 1 << v
            expand(r_size + 1, r_mask | bit, cand & radj[v])
            cand ^= bit

    expand(0, 0, cand0)
    return best_size, best_mask, nodes, exceeded


def max_clique(g: CliqueGraph, budget: int = DEFAULT_NODE_BUDGET, threads: int = 1) -> CliqueResult:
    """Deterministic exact maximum clique within a node budget.

    The initial vertex order is descending degree with ties by index.
    With threads > 1 the root branch list is split across workers and the
    per-subtree results are merged by size, ties going to the
    lexicographically smallest witness; size and status match the
    sequential run.
    """
    if threads < 1:
        raise ValueError("threads must be >= 1")
    n = g.vertex_count
    if n == 0:
        return CliqueResult(0, (), "exact", 0)

    deg = [a.bit_count() for a in g.adj]
    order = sorted(range(n), key=lambda v: (-deg[v], v))
    pos = [0] * n
    for i, v in enumerate(order):
        pos[v] = i
    radj = [0] * n
    for i, old in enumerate(order):
        mask = 0
        for v in bit_indices(g.adj[old]):
            mask |= 1 << pos[v]
        radj[i] = mask
    full = (1 << n) - 1

    if threads == 1:
        size, mask, nodes, exceeded = _search(radj, full, budget)
    else:
        # independent root subtrees: vertex i with candidates among later
        # indices only, merged deterministically afterwards
        tasks = []
        for i in range(n):
            later = full & ~((1 << (i + 1)) - 1)
            tasks.append((i, later & radj[i]))

        def run(task: tuple[int, int]) -> tuple[int, int, int, bool]:
            i, cand = task
            s, m, nd, ex = _search(radj, cand, budget)
            return s + 1, m | (1 << i), nd, ex

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, tasks))
        nodes = sum(r[2] for r in results)
        exceeded = any(r[3] for r in results) or nodes > budget
        size, mask = 0, 0
        for s, m, _, _ in results:
            if s > size:
                size, mask = s, m
            elif s == size and s > 0:
                wit_new = sorted(order[i] for i in bit_indices(m))
                wit_old = sorted(order[i] for i in bit_indices(mask))
                if wit_new < wit_old:
                    mask = m

    witness = tuple(sorted(order[i] for i in bit_indices(mask)))
    for a, b in combinations(witness, 2):
        if not g.adj[a] >> b & 1:
            raise AssertionError("internal error: witness is not a clique")
    status = "exact" if not exceeded else "lower-bound-only"
    return CliqueResult(size, witness, status, nodes)


def brute_force_f(
    n: int,
    k: int,
    ell: int,
    budget: int = DEFAULT_NODE_BUDGET,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    threads: int = 1,
) -> CliqueResult:
    """Exact clique number of the ell-fold xor-power of KG(n, k)."""
    g = build_product_graph(n, k, ell, vertex_budget=vertex_budget, with_labels=False)
    return max_clique(g, budget=budget, threads=threads)


@dataclass(frozen=True)
class GF2Matrix:
    """Rectangular 0/1 matrix; each row is an int bit vector of width columns."""

    width: int
    rows: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.width < 0:
            raise ValueError("width must be non-negative")
        for r in self.rows:
            if r < 0 or r >> self.width:
                raise ValueError("row has bits outside the stated width")


def gf2_rank(m: GF2Matrix) -> int:
    """Rank over the two-element field by row elimination."""
    work = list(m.rows)
    rank = 0
    row_idx = 0
    for col in range(m.width):
        pivot = None
        for r in range(row_idx, len(work)):
            if work[r] >> col & 1:
                pivot = r
                break
        if pivot is None:
            continue
        work[row_idx], work[pivot] = work[pivot], work[row_idx]
        for r in range(len(work)):
            if r != row_idx and work[r] >> col & 1:
                work[r] ^= work[row_idx]
        rank += 1
        row_idx += 1
        if row_idx == len(work):
            break
    return rank


def family_gf2_system(f: Family) -> GF2Matrix:
    """Characteristic vectors of all members followed by all block sets."""
    width = f.layout.size
    rows = [m.bits for m in f.members]
    rows.extend(f.layout.block_masks())
    return GF2Matrix(width, tuple(rows))


def check_rank_bound(f: Family) -> bool:
    """Rank consequence of the unique-dependency lemma for k=1 families.

    The member and block characteristic vectors of a valid family span a
    space of dimension at least len(f) + ell - 1 over GF(2), which forces
    len(f) <= ell*n - ell + 1.  Returns whether the rank inequality holds.
    """
    if f.layout.k != 1:
        raise ValueError("rank bound applies to k=1 families only")
    r = gf2_rank(family_gf2_system(f))
    return r >= len(f) + f.layout.ell - 1


def write_dimacs(g: CliqueGraph) -> str:
    """DIMACS clique format: 'p edge V E' then 1-indexed 'e u v' lines."""
    n = g.vertex_count
    lines = [f"p edge {n} {g.edge_count}"]
    for u in range(n):
        upper = g.adj[u] >> (u + 1) << (u + 1)
        lines.extend(f"e {u + 1} {v + 1}" for v in bit_indices(upper))
    return "\n".join(lines) + "\n"


def read_dimacs(text: str) -> CliqueGraph:
    n = None
    edges: list[tuple[int, int]] = []
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise ValueError(f"line {no}: malformed problem line {line!r}")
            n = int(parts[2])
        elif parts[0] == "e":
            if len(parts) != 3:
                raise ValueError(f"line {no}: malformed edge line {line!r}")
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise ValueError(f"line {no}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing 'p edge' line")
    adj = [0] * n
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u + 1}, {v + 1}) outside vertex range")
        if u != v:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
    return CliqueGraph(tuple(adj))
