"""Closed-form bounds, cross-intersecting matchings, and peeling.

Everything arithmetic is exact: the slack function gamma is carried as a
rational, so identities such as gamma(3) = 1/3 hold on the nose, and
floating point appears only in Monte-Carlo frequency estimates.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, factorial

import numpy as np

from .setsystem import Family, verify_family
from . import constructions as cons
from . import solver as slv


# ---------------------------------------------------------------------------
# the slack function and closed-form bounds


def gamma(k: int) -> Fraction:
    """Slack in the matching weight bound, as an exact rational.

    Defined through 1/(1+gamma(k)) = 1 - (k-2)(k-3)/(2 C(2k,k))
    - (k-2)/C(3k,2k) - (k-2) C(2k,k)/C(3k,k).  gamma(2) = 0 and
    gamma(3) = 1/3; the sequence decays to zero for large k.
    """
    if k < 2:
        raise ValueError("gamma is defined for k >= 2")
    c2k = comb(2 * k, k)
    reciprocal = (
        Fraction(1)
        - Fraction((k - 2) * (k - 3), 2 * c2k)
        - Fraction(k - 2, comb(3 * k, 2 * k))
        - Fraction((k - 2) * c2k, comb(3 * k, k))
    )
    return 1 / reciprocal - 1


def gamma_for_upper(k: int) -> Fraction:
    """gamma with the k=2 value bumped to 1/3, as the two-block ceiling uses."""
    return Fraction(1, 3) if k == 2 else gamma(k)


def lower_c2(k: int) -> int:
    """Guaranteed two-block surplus over floor(n/k): k*C(2k,k)/2 - k."""
    if k < 1:
        raise ValueError("k must be positive")
    return comb(2 * k, k) * k // 2 - k


def upper_c2(n: int, k: int) -> Fraction:
    """Two-block ceiling floor(n/k) + (1 + gamma(k)) * k * C(2k,k)."""
    if n < 1 or k < 2:
        raise ValueError("needs n >= 1 and k >= 2")
    return Fraction(n // k) + (1 + gamma_for_upper(k)) * k * comb(2 * k, k)


def t1_bounds(n: int, ell: int) -> tuple[int, int]:
    """Sandwich for k=1 and ell >= 3: ell*n - 2*ell - 1 .. ell*n - ell + 1."""
    if ell < 3 or n < 1:
        raise ValueError("needs ell >= 3 and n >= 1")
    return ell * n - 2 * ell - 1, ell * n - ell + 1


def power_upper(n: int, k: int, ell: int) -> int:
    """Induction-chain ceiling: 2*4*..*ell * n**(ell/2) for even ell and
    2*4*..*(ell-1) * n**((ell+1)/2) / k (floored) for odd ell."""
    if n < 1 or k < 1 or ell < 1:
        raise ValueError("parameters must be positive")
    half = ell // 2
    evens = 2**half * factorial(half)
    if ell % 2 == 0:
        return evens * n**half
    return int(Fraction(evens * n ** (half + 1), k))


def power_upper_quoted(n: int, k: int, ell: int) -> int:
    """Weaker closed form 2**floor(ell/2) * floor(ell/2)! * n**floor((ell+1)/2)."""
    if n < 1 or k < 1 or ell < 1:
        raise ValueError("parameters must be positive")
    half = ell // 2
    return 2**half * factorial(half) * n ** ((ell + 1) // 2)


def power_lower(n: int, k: int, ell: int) -> int | None:
    """floor(n/k)**floor(log2(ell+1)), or None when k is too small for the
    matrix construction to apply."""
    if n < 1 or k < 1 or ell < 1:
        raise ValueError("parameters must be positive")
    e = (ell + 1).bit_length() - 1
    if k < e:
        return None
    return (n // k) ** e


# ---------------------------------------------------------------------------
# cross-intersecting matchings


@dataclass(frozen=True)
class CrossMatching:
    """Groups of pairwise disjoint k-sets where sets from different groups
    always intersect.  Structural validity is judged by verify_matching."""

    k: int
    groups: tuple[tuple[frozenset[int], ...], ...]

    @classmethod
    def from_lists(cls, k: int, groups) -> "CrossMatching":
        return cls(
            k,
            tuple(
                tuple(sorted((frozenset(s) for s in g), key=sorted)) for g in groups
            ),
        )

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.groups)

    @property
    def ground(self) -> frozenset[int]:
        return frozenset(e for g in self.groups for s in g for e in s)


@dataclass(frozen=True)
class MatchingReport:
    valid: bool
    problems: tuple[str, ...]
    weight: int
    bound: Fraction | None
    within_bound: bool


def verify_matching(m: CrossMatching) -> MatchingReport:
    """Check the matching structure and its weight against (1+gamma)C(2k,k).

    weight = sum of d_i (d_i - 1); every valid matching must stay within
    the bound, with equality for the complementary-pair matching at k=2.
    """
    problems: list[str] = []
    if m.k < 2:
        problems.append(f"k={m.k} must be at least 2")
    if len(m.groups) < 2:
        problems.append(f"found {len(m.groups)} groups, need at least 2")
    for i, g in enumerate(m.groups):
        if len(g) < 2:
            problems.append(f"group {i} has {len(g)} sets, need at least 2")
        if len(g) > max(m.k, 0):
            problems.append(f"group {i} has {len(g)} > k pairwise disjoint sets")
        for s in g:
            if len(s) != m.k:
                problems.append(f"group {i} holds a set of size {len(s)}, not {m.k}")
        for a, b in combinations(g, 2):
            if a & b:
                problems.append(f"group {i} sets {sorted(a)} and {sorted(b)} intersect")
    for i, j in combinations(range(len(m.groups)), 2):
        for a in m.groups[i]:
            for b in m.groups[j]:
                if not a & b:
                    problems.append(
                        f"groups {i} and {j} hold disjoint sets {sorted(a)}, {sorted(b)}"
                    )
    weight = sum(d * (d - 1) for d in m.sizes)
    bound = (1 + gamma(m.k)) * comb(2 * m.k, m.k) if m.k >= 2 else None
    within = bound is not None and weight <= bound
    return MatchingReport(not problems, tuple(problems), weight, bound, within)


def complementary_pair_matching(k: int) -> CrossMatching:
    """All complementary pairs of k-subsets of a 2k-point ground set."""
    groups = []
    full = frozenset(range(2 * k))
    for c in combinations(range(1, 2 * k), k - 1):
        x = frozenset((0, *c))
        groups.append((x, full - x))
    return CrossMatching.from_lists(k, groups)


def max_cross_matching_weight(ground_size: int, k: int) -> tuple[int, CrossMatching | None]:
    """Exhaustive maximum weight over all valid matchings inside a fixed
    ground set.  Groups are enumerated as collections of >= 2 pairwise
    disjoint k-sets; matchings are cliques in the compatibility relation
    (every cross pair of sets intersects), and weight only grows when a
    group is added, so scanning maximal cliques is exhaustive."""
    sets = [frozenset(c) for c in combinations(range(ground_size), k)]

    groups: list[tuple[frozenset[int], ...]] = []

    def grow(start: int, chosen: list[frozenset[int]]) -> None:
        if len(chosen) >= 2:
            groups.append(tuple(chosen))
        for idx in range(start, len(sets)):
            s = sets[idx]
            if all(s.isdisjoint(c) for c in chosen):
                chosen.append(s)
                grow(idx + 1, chosen)
                chosen.pop()

    grow(0, [])

    def compatible(ga, gb) -> bool:
        return all(a & b for a in ga for b in gb)

    gcount = len(groups)
    compat = [0] * gcount
    for i in range(gcount):
        for j in range(i + 1, gcount):
            if compatible(groups[i], groups[j]):
                compat[i] |= 1 << j
                compat[j] |= 1 << i

    best_weight = 0
    best: tuple[int, ...] | None = None

    def weight_of(sel: tuple[int, ...]) -> int:
        return sum(len(groups[i]) * (len(groups[i]) - 1) for i in sel)

    def extend(sel: list[int], cand: int) -> None:
        nonlocal best_weight, best
        if len(sel) >= 2:
            w = weight_of(tuple(sel))
            if w > best_weight:
                best_weight, best = w, tuple(sel)
        while cand:
            low = cand & -cand
            i = low.bit_length() - 1
            cand ^= low
            sel.append(i)
            extend(sel, cand & compat[i])
            sel.pop()

    extend([], (1 << gcount) - 1)
    if best is None:
        return 0, None
    return best_weight, CrossMatching.from_lists(k, [groups[i] for i in best])


# ---------------------------------------------------------------------------
# peeling two-block families


@dataclass(frozen=True)
class PeelRound:
    """One extraction step: pivot element, its members, and the collateral
    members removed for meeting them inside block B."""

    pivot: int
    extracted: tuple
    collateral: tuple
    degree: int


@dataclass(frozen=True)
class PeelingTrace:
    q: int
    rounds: tuple[PeelRound, ...]
    residual: tuple
    a_traces: tuple[tuple[frozenset[int], ...], ...]
    b_degree_exceeded: bool
    accounting_ok: bool

    def matching(self, k: int) -> CrossMatching:
        return CrossMatching.from_lists(k, self.a_traces)


def peel(f: Family) -> PeelingTrace:
    """Pivot-removal decomposition of a two-block family.

    While two members share a block-B element, remove the members through
    a maximum-degree B-element (ties to the lowest index) together with
    everything meeting them in B; the A-sides of each extracted batch form
    the groups of a cross-intersecting matching once there are two rounds.
    Each round removes at most d + (k-1) d (d-1) members; accounting_ok
    records that this held, and b_degree_exceeded flags an input whose
    B-degrees exceed k.
    """
    lo = f.layout
    if lo.ell != 2:
        raise ValueError("peeling decomposes two-block families only")
    k = lo.k
    b_lo, b_hi = lo.n, 2 * lo.n

    def b_degrees(members) -> dict[int, int]:
        degs: dict[int, int] = {}
        for m in members:
            for e in m.indices:
                if e >= b_lo:
                    degs[e] = degs.get(e, 0) + 1
        return degs

    current = list(f.members)
    exceeded = any(d > k for d in b_degrees(current).values())
    rounds: list[PeelRound] = []
    accounting_ok = True
    while True:
        degs = b_degrees(current)
        top = max(degs.values(), default=0)
        if top <= 1:
            break
        pivot = min(e for e, d in degs.items() if d == top)
        extracted = [m for m in current if m.bits >> pivot & 1]
        zone = 0
        for m in extracted:
            zone |= m.bits
        zone &= ((1 << lo.n) - 1) << lo.n
        rest = [m for m in current if not m.bits >> pivot & 1]
        collateral = [m for m in rest if m.bits & zone]
        current = [m for m in rest if not m.bits & zone]
        d = len(extracted)
        if len(extracted) + len(collateral) > d + (k - 1) * d * (d - 1):
            accounting_ok = False
        rounds.append(PeelRound(pivot, tuple(extracted), tuple(collateral), d))
    removed = sum(len(r.extracted) + len(r.collateral) for r in rounds)
    assert len(f) == len(current) + removed
    traces = tuple(
        tuple(sorted((frozenset(m.block_indices(0)) for m in r.extracted), key=sorted))
        for r in rounds
    )
    return PeelingTrace(
        q=len(rounds),
        rounds=tuple(rounds),
        residual=tuple(current),
        a_traces=traces,
        b_degree_exceeded=exceeded,
        accounting_ok=accounting_ok,
    )


def degree_dichotomy(f: Family) -> bool | None:
    """For two-block families with more than 2k**3 members: is the maximum
    degree at most k in block A or in block B?  None when the family is
    too small for the dichotomy to be guaranteed."""
    lo = f.layout
    if lo.ell != 2:
        raise ValueError("degree dichotomy applies to two-block families only")
    k = lo.k
    if len(f) <= 2 * k**3:
        return None
    max_a = max((sum(1 for m in f.members if m.bits >> e & 1) for e in range(lo.n)), default=0)
    max_b = max(
        (sum(1 for m in f.members if m.bits >> e & 1) for e in range(lo.n, 2 * lo.n)),
        default=0,
    )
    return max_a <= k or max_b <= k


# ---------------------------------------------------------------------------
# Monte-Carlo check of permutation types


@dataclass(frozen=True)
class TypeFrequencies:
    samples: int
    seed: int
    counts: tuple[int, ...]
    typeless: int

    @property
    def estimates(self) -> tuple[float, ...]:
        return tuple(c / self.samples for c in self.counts)


def permutation_type_mc(m: CrossMatching, samples: int, seed: int) -> TypeFrequencies:
    """Sample uniform orderings of the ground set and classify each by type.

    An ordering has type i when some set of group i lies entirely before a
    disjoint partner from the same group.  Cross-intersection makes two
    simultaneous types impossible; that is asserted per sample, not
    statistically.  Reproducible for a fixed (samples, seed) via a PCG64
    generator.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    report = verify_matching(m)
    if not report.valid:
        raise ValueError(f"matching is invalid: {report.problems[0]}")
    ground = sorted(m.ground)
    g_index = {e: i for i, e in enumerate(ground)}
    rng = np.random.default_rng(seed)
    keys = rng.random((samples, len(ground)))
    ranks = np.argsort(np.argsort(keys, axis=1), axis=1)

    typed = np.zeros((samples, len(m.groups)), dtype=bool)
    for i, group in enumerate(m.groups):
        mins = []
        maxs = []
        for s in group:
            cols = [g_index[e] for e in s]
            sub = ranks[:, cols]
            mins.append(sub.min(axis=1))
            maxs.append(sub.max(axis=1))
        mins_arr = np.stack(mins)
        maxs_arr = np.stack(maxs)
        # type i iff some set ends before another begins
        typed[:, i] = maxs_arr.min(axis=0) < mins_arr.max(axis=0)
    per_sample = typed.sum(axis=1)
    if per_sample.max(initial=0) > 1:
        raise RuntimeError("found an ordering with two types; matching cannot be valid")
    counts = tuple(int(c) for c in typed.sum(axis=0))
    return TypeFrequencies(samples, seed, counts, int((per_sample == 0).sum()))


# ---------------------------------------------------------------------------
# bound tables


def combined_upper(n: int, k: int, ell: int) -> int:
    """Best applicable ceiling for the clique number at (n, k, ell)."""
    if ell == 1:
        return n // k
    uppers = [power_upper(n, k, ell)]
    if ell == 2 and k >= 2:
        uppers.append(int(upper_c2(n, k)))
    if k == 1 and ell >= 3:
        uppers.append(ell * n - ell + 1)
    return min(uppers)


def best_construction(n: int, k: int, ell: int) -> tuple[int, str, Family]:
    """Largest family the explicit constructions yield at (n, k, ell)."""
    candidates: list[tuple[int, str, Family]] = []
    base = cons.lift_to(cons.disjoint_family(n, k), ell)
    candidates.append((len(base), "disjoint", base))
    if ell == 2 and n >= cons.min_n_for_pair_construction(k):
        fam = cons.construct_f2_lower(n, k)
        candidates.append((len(fam), "pair-lattice", fam))
    if k == 1 and ell >= 3:
        core = cons.build_core(ell)
        if n >= max(core.class_sizes):
            fam = cons.core_to_family(core, [n] * ell)
            candidates.append((len(fam), "core", fam))
    if k == 1 and ell >= 4:
        q = ell - 1
        if q % 2 == 1 and cons._is_prime(q) and n >= q:
            from .setsystem import pad_blocks

            fam = pad_blocks(cons.plane_family(q), n)
            candidates.append((len(fam), "plane", fam))
    t = (ell + 1).bit_length() - 1
    if t >= 2 and k >= t:
        fam = cons.lift_to(cons.matrix_family(n, k, t), ell)
        candidates.append((len(fam), "matrix", fam))
    return max(candidates, key=lambda c: (c[0], c[1]))


def bound_rows(
    ells,
    ns,
    ks,
    node_budget: int = slv.DEFAULT_NODE_BUDGET,
    vertex_budget: int = slv.DEFAULT_VERTEX_BUDGET,
    threads: int = 1,
) -> list[dict]:
    """One row per grid cell: construction floor, solver value, formula
    ceiling.  Cells beyond the vertex budget keep the construction value
    as a lower bound."""
    rows = []
    for ell in ells:
        for k in ks:
            for n in ns:
                if k > n:
                    continue
                lower, name, fam = best_construction(n, k, ell)
                if not verify_family(fam).valid:
                    raise AssertionError(f"construction {name} invalid at {(n, k, ell)}")
                upper = combined_upper(n, k, ell)
                exact: int | None = None
                lb = lower
                try:
                    res = slv.brute_force_f(
                        n, k, ell, budget=node_budget, vertex_budget=vertex_budget, threads=threads
                    )
                    if res.status == "exact":
                        exact = res.size
                    else:
                        lb = max(lb, res.size)
                except slv.VertexBudgetExceeded:
                    pass
                if exact is not None and not lower <= exact <= upper:
                    raise AssertionError(
                        f"bounds violated at {(n, k, ell)}: {lower} <= {exact} <= {upper}"
                    )
                rows.append(
                    {
                        "ell": ell,
                        "n": n,
                        "k": k,
                        "lower_construction": lower,
                        "exact_or_lb": exact if exact is not None else f">={lb}",
                        "upper_formula": upper,
                        "tight?": "yes" if exact == upper else "no",
                    }
                )
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    out = io.StringIO()
    writer = csv.DictWriter(
        out,
        fieldnames=["ell", "n", "k", "lower_construction", "exact_or_lb", "upper_formula", "tight?"],
        lineterminator="\n",
    )
    writer.writeheader()
    writer.writerows(rows)
    return out.getvalue()
