"""Explicit semi-intersecting families.

Five sources of large cliques in xor-powers of Kneser graphs:

* the two-block pair/lattice construction (complementary k-set labels on a
  2k-point set, k x k lattices whose rows and columns pair up, leftover
  disjoint k-sets),
* ell-cores and their fusion, giving k=1 families of size ell*n - |U|,
* projective planes of odd prime order, tight for even ell = q + 1,
* the matrix construction of size floor(n/k)**t for ell = 2**t - 1,
* monotone lifts: padding blocks and appending a block with a fixed k-set.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb

from .setsystem import Family, Layout, pad_blocks


# ---------------------------------------------------------------------------
# two blocks


def min_n_for_pair_construction(k: int) -> int:
    """Smallest block size the pair/lattice construction supports."""
    if k < 1:
        raise ValueError("k must be positive")
    return max(k, (comb(2 * k, k) - 2) * k * k // 2)


def construct_f2_lower(n: int, k: int) -> Family:
    """Two-block family of size floor(n/k) + k*C(2k,k)/2 - k.

    Needs n >= (C(2k,k) - 2) * k**2 / 2 so that the m - 1 lattices of k**2
    points fit into block B, where m = C(2k,k)/2.  Labels H_1..H_m are the
    k-subsets of K = {0..2k-1} containing 0, in lexicographic order, and
    G_i is the complement of H_i inside K.
    """
    least = min_n_for_pair_construction(k)
    if n < least:
        raise ValueError(
            f"n={n} violates the lattice-packing hypothesis for k={k}: "
            f"the minimal admissible n is {least}"
        )
    m = comb(2 * k, k) // 2
    layout = Layout(2, n, k)
    labels = [frozenset((0, *rest)) for rest in combinations(range(1, 2 * k), k - 1)]
    kpoints = frozenset(range(2 * k))

    members: list[frozenset[int]] = []
    for i in range(1, m):
        h, g = labels[i], kpoints - labels[i]
        base = n + (i - 1) * k * k  # lattice L_{i+1}, row-major inside block B
        for r in range(k):
            members.append(h | {base + r * k + c for c in range(k)})
        for c in range(k):
            members.append(g | {base + r * k + c for r in range(k)})
    d = n // k - (m - 1) * k
    free = n + (m - 1) * k * k
    for j in range(d):
        members.append(labels[0] | {free + j * k + x for x in range(k)})
    fam = Family.from_index_lists(layout, members)
    assert len(fam) == n // k + comb(2 * k, k) * k // 2 - k
    return fam


def disjoint_family(n: int, k: int) -> Family:
    """The trivial one-block family: floor(n/k) pairwise disjoint k-sets."""
    layout = Layout(1, n, k)
    return Family.from_index_lists(
        layout, [range(j * k, (j + 1) * k) for j in range(n // k)]
    )


# ---------------------------------------------------------------------------
# cores


@dataclass(frozen=True)
class Core:
    """An ell-core over elements 0..|U|-1.

    classes[i] lists the elements of U inside block i; sets[i] is B_i, an
    (ell-1)-set avoiding block i and meeting every other class once, with
    |B_i & B_j| + ell odd for all pairs.
    """

    ell: int
    classes: tuple[tuple[int, ...], ...]
    sets: tuple[frozenset[int], ...]

    @property
    def universe_size(self) -> int:
        return sum(len(c) for c in self.classes)

    @property
    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def core_type(self) -> tuple[int, ...]:
        """Class-size multiset in canonical (sorted) form."""
        return tuple(sorted(self.class_sizes))


def validate_core(core: Core) -> tuple[str, ...]:
    """All violated core conditions, empty when the core is valid."""
    problems: list[str] = []
    ell = core.ell
    if len(core.classes) != ell or len(core.sets) != ell:
        return (f"expected {ell} classes and {ell} sets",)
    seen = [e for c in core.classes for e in c]
    if sorted(seen) != list(range(len(seen))):
        problems.append("classes do not partition a contiguous element range")
    where = {e: i for i, c in enumerate(core.classes) for e in c}
    for i, b in enumerate(core.sets):
        if len(b) != ell - 1:
            problems.append(f"B_{i + 1} has size {len(b)}, expected {ell - 1}")
        hits = [0] * ell
        for e in b:
            hits[where[e]] += 1
        if hits[i] != 0:
            problems.append(f"B_{i + 1} meets its own class")
        bad = [j for j in range(ell) if j != i and hits[j] != 1]
        if bad:
            problems.append(f"B_{i + 1} does not meet classes {bad} exactly once")
    for i in range(ell):
        for j in range(i + 1, ell):
            if (len(core.sets[i] & core.sets[j]) + ell) % 2 == 0:
                problems.append(f"|B_{i + 1} & B_{j + 1}| + ell is even")
    return tuple(problems)


def core_is_valid(core: Core) -> bool:
    return not validate_core(core)


def _core_from_names(class_names: list[list[str]], set_names: list[list[str]]) -> Core:
    ids: dict[str, int] = {}
    for cls in class_names:
        for name in cls:
            ids[name] = len(ids)
    return Core(
        len(class_names),
        tuple(tuple(ids[name] for name in cls) for cls in class_names),
        tuple(frozenset(ids[name] for name in b) for b in set_names),
    )


def core3() -> Core:
    """3-core of type (2,2,2) on 6 elements; distinct sets are disjoint."""
    return _core_from_names(
        [["a12", "a13"], ["a21", "a23"], ["a31", "a32"]],
        [["a31", "a21"], ["a12", "a32"], ["a23", "a13"]],
    )


def core4() -> Core:
    """4-core of type (2,2,2,1) on 7 elements; distinct sets meet once."""
    return _core_from_names(
        [["a12", "a13"], ["a21", "a23"], ["a31", "a32"], ["a4"]],
        [
            ["a21", "a31", "a4"],
            ["a12", "a32", "a4"],
            ["a13", "a23", "a4"],
            ["a13", "a21", "a32"],
        ],
    )


def core5() -> Core:
    """5-core of type (2,2,2,1,1) on 8 elements; distinct sets meet evenly."""
    return _core_from_names(
        [["a12", "a13"], ["a21", "a23"], ["a31", "a32"], ["a4"], ["a5"]],
        [
            ["a21", "a31", "a4", "a5"],
            ["a12", "a32", "a4", "a5"],
            ["a13", "a23", "a4", "a5"],
            ["a13", "a21", "a32", "a5"],
            ["a12", "a23", "a31", "a4"],
        ],
    )


def _relabel(core: Core) -> Core:
    new_id: dict[int, int] = {}
    for cls in core.classes:
        for e in cls:
            new_id[e] = len(new_id)
    return Core(
        core.ell,
        tuple(tuple(new_id[e] for e in cls) for cls in core.classes),
        tuple(frozenset(new_id[e] for e in b) for b in core.sets),
    )


def permute_classes(core: Core, order: tuple[int, ...]) -> Core:
    """Reorder classes; set i follows its class so core validity is kept."""
    if sorted(order) != list(range(core.ell)):
        raise ValueError(f"order must be a permutation of 0..{core.ell - 1}")
    return _relabel(
        Core(
            core.ell,
            tuple(core.classes[o] for o in order),
            tuple(core.sets[o] for o in order),
        )
    )


def fuse(p_core: Core, q_core: Core) -> Core:
    """Fuse a p-core and a q-core into a (p+q-1)-core.

    With disjoint universes, B_i = B'_i | B''_1 for i <= p and
    B_j = B'_p | B''_{j-p+1} for j > p; class p absorbs the first class of
    the second core.  Types combine as
    (x_1, .., x_{p-1}, x_p + y_1, y_2, .., y_q).
    """
    p, q = p_core.ell, q_core.ell
    if p < 3 or q < 3:
        raise ValueError("fusion needs cores with at least 3 classes each")
    shift = p_core.universe_size
    sec_classes = [tuple(e + shift for e in c) for c in q_core.classes]
    sec_sets = [frozenset(e + shift for e in b) for b in q_core.sets]
    classes = (
        list(p_core.classes[: p - 1])
        + [tuple(p_core.classes[p - 1]) + sec_classes[0]]
        + sec_classes[1:]
    )
    sets = [p_core.sets[i] | sec_sets[0] for i in range(p)]
    sets += [p_core.sets[p - 1] | sec_sets[j] for j in range(1, q)]
    return _relabel(Core(p + q - 1, tuple(classes), tuple(sets)))


def _singleton_first(core: Core) -> Core:
    sizes = core.class_sizes
    i = sizes.index(1)
    return permute_classes(core, (i, *(j for j in range(core.ell) if j != i)))


def build_core(ell: int) -> Core:
    """An ell-core with universe size at most 2*ell + 1.

    Explicit cores for ell = 3, 4, 5; larger ones by fusing copies of the
    5-core reordered to type (1,2,2,2,1) into a (4m+1)-core of type
    (1,2,..,2,1), then attaching a 4-core or the 3-core to hit the other
    residues mod 4.
    """
    if ell < 3:
        raise ValueError("cores need at least 3 classes")
    if ell == 3:
        return core3()
    if ell == 4:
        return core4()
    if ell == 5:
        return core5()
    r = ell % 4
    if r == 1:
        # (1,2,..,2,1) chain: fuse in another reordered 5-core
        prev = build_core(ell - 4) if ell > 9 else _singleton_first(core5())
        return fuse(prev, _singleton_first(core5()))
    if r == 0:
        # type (2,..,2,1): 4-core absorbing the (ell-3)-core of type (1,2,..,2,1)
        prev = build_core(ell - 3) if ell > 8 else _singleton_first(core5())
        return fuse(core4(), prev)
    if r == 3:
        # type (2,..,2): the (ell-3)-core of type (2,..,2,1) absorbs a (1,2,2,2) 4-core
        return fuse(build_core(ell - 3), _singleton_first(core4()))
    # r == 2, type (2,2,3,2,..,2): 3-core absorbing a (1,2,..,2) core
    return fuse(core3(), _singleton_first(build_core(ell - 2)))


def core_to_family(core: Core, n_sizes: list[int] | tuple[int, ...]) -> Family:
    """k=1 family generated by a core: every B_i plus one extension element.

    Block i holds the i-th class in its first positions and n_sizes[i] - c_i
    extension elements after it; blocks are padded to max(n_sizes) with
    unused slots.  The family has exactly sum(n_sizes) - |U| members (empty
    when no block has room to extend).
    """
    if len(n_sizes) != core.ell:
        raise ValueError(f"need {core.ell} block sizes, got {len(n_sizes)}")
    sizes = core.class_sizes
    for i, (ni, ci) in enumerate(zip(n_sizes, sizes)):
        if ni < ci:
            raise ValueError(f"block {i} of size {ni} cannot hold a class of size {ci}")
    n = max(n_sizes)
    layout = Layout(core.ell, n, 1)
    pos: dict[int, int] = {}
    for i, cls in enumerate(core.classes):
        for off, e in enumerate(cls):
            pos[e] = i * n + off
    members = []
    for i in range(core.ell):
        base = [pos[e] for e in core.sets[i]]
        for off in range(sizes[i], n_sizes[i]):
            members.append(base + [i * n + off])
    return Family.from_index_lists(layout, members)


# ---------------------------------------------------------------------------
# projective planes


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    p = 2
    while p * p <= q:
        if q % p == 0:
            return False
        p += 1
    return True


def _plane_points(q: int) -> list[tuple[int, int, int]]:
    """Points of PG(2, q) as normalized homogeneous coordinates."""
    pts = [(1, b, c) for b in range(q) for c in range(q)]
    pts += [(0, 1, c) for c in range(q)]
    pts.append((0, 0, 1))
    return pts


def plane_family(q: int) -> Family:
    """Tight family of size q**2 from the projective plane of order q.

    Requires q an odd prime.  With v = (1:0:0), the q + 1 lines through v
    become the blocks (v removed) and the q**2 remaining lines become the
    members: two of them share exactly one point, so they are disjoint in
    q blocks, an odd count.  The size (ell-1)**2 meets the algebraic
    ceiling ell*n - ell + 1 with ell = q + 1, n = q.
    """
    if not _is_prime(q) or q % 2 == 0:
        raise ValueError(f"q={q} is not an odd prime")
    pts = _plane_points(q)
    # lines have the same normalized coordinate forms; incidence is
    # orthogonality of the coordinate triples mod q
    lines = _plane_points(q)
    on = lambda ln, pt: (ln[0] * pt[0] + ln[1] * pt[1] + ln[2] * pt[2]) % q == 0
    v = (1, 0, 0)
    through_v = sorted(ln for ln in lines if on(ln, v))
    others = sorted(ln for ln in lines if not on(ln, v))
    assert len(through_v) == q + 1 and len(others) == q * q

    layout = Layout(q + 1, q, 1)
    where: dict[tuple[int, int, int], int] = {}
    for i, ln in enumerate(through_v):
        block_pts = sorted(p for p in pts if on(ln, p) and p != v)
        for off, p in enumerate(block_pts):
            where[p] = i * q + off
    members = []
    for ln in others:
        members.append([where[p] for p in pts if on(ln, p)])
    return Family.from_index_lists(layout, members)


# ---------------------------------------------------------------------------
# the matrix construction


@dataclass(frozen=True)
class MatrixPlan:
    """Shape data for the power construction with ell = 2**t - 1 rows.

    h[a][b] marks which of the t cell columns row a uses (all rows distinct
    and nonzero); c[a][b] is the cell size, zero exactly where h is zero,
    with every row of c summing to k.
    """

    t: int
    h: tuple[tuple[int, ...], ...]
    c: tuple[tuple[int, ...], ...]


def matrix_plan(k: int, t: int) -> MatrixPlan:
    """Canonical plan: row a is the binary expansion of a + 1; the k units
    of each row are spread as evenly as possible over its nonzero columns,
    leftovers going to the lowest column indices."""
    if t < 2:
        raise ValueError("t must be at least 2")
    if k < t:
        raise ValueError(f"k={k} must be at least t={t} to fill every used cell")
    h = []
    c = []
    for a in range(1, 2**t):
        row = tuple((a >> b) & 1 for b in range(t))
        used = [b for b in range(t) if row[b]]
        base, extra = divmod(k, len(used))
        crow = [0] * t
        for rank, b in enumerate(used):
            crow[b] = base + (1 if rank < extra else 0)
        h.append(row)
        c.append(tuple(crow))
    return MatrixPlan(t, tuple(h), tuple(c))


def matrix_family(n: int, k: int, t: int) -> Family:
    """Family of size floor(n/k)**t over ell = 2**t - 1 blocks.

    Each block is split into m = floor(n/k) segments of k points, each
    segment into cells sized by the plan row; cells with equal column and
    segment indices join into the parts S^p_b, and each member picks one
    segment index per column.  Blocks keep size n, with the tail beyond
    m*k unused.
    """
    if n < k:
        raise ValueError(f"n={n} must be at least k={k}")
    plan = matrix_plan(k, t)
    ell = 2**t - 1
    m = n // k
    layout = Layout(ell, n, k)

    # parts[p][b] = all elements of segment p, column b across the blocks
    parts: list[list[list[int]]] = [[[] for _ in range(t)] for _ in range(m)]
    for a in range(ell):
        for p in range(m):
            off = a * n + p * k
            for b in range(t):
                size = plan.c[a][b]
                parts[p][b].extend(range(off, off + size))
                off += size
    members = []
    choice = [0] * t
    while True:
        members.append([e for b in range(t) for e in parts[choice[b]][b]])
        b = t - 1
        while b >= 0 and choice[b] == m - 1:
            choice[b] = 0
            b -= 1
        if b < 0:
            break
        choice[b] += 1
    fam = Family.from_index_lists(layout, members)
    assert len(fam) == m**t
    return fam


# ---------------------------------------------------------------------------
# monotone lifts


def extend_power(f: Family, s_extra: list[int] | tuple[int, ...]) -> Family:
    """Append a block and add the same fixed k-set of it to every member.

    The new block never separates two members, so pairwise disjoint-block
    counts, and validity, are unchanged.  s_extra gives the k chosen
    offsets inside the new block, 0 <= offset < n.
    """
    lo = f.layout
    extra = sorted(set(s_extra))
    if len(extra) != len(list(s_extra)) or len(extra) != lo.k:
        raise ValueError(f"s_extra must be {lo.k} distinct offsets")
    if extra and (extra[0] < 0 or extra[-1] >= lo.n):
        raise ValueError(f"offsets must lie in 0..{lo.n - 1}")
    layout = Layout(lo.ell + 1, lo.n, lo.k)
    tail = [lo.ell * lo.n + off for off in extra]
    return Family.from_index_lists(layout, ([*m.indices, *tail] for m in f.members))


def lift_to(f: Family, ell: int) -> Family:
    """Extend a family to ell blocks by repeatedly appending {0..k-1}."""
    if ell < f.layout.ell:
        raise ValueError("cannot reduce the number of blocks")
    out = f
    while out.layout.ell < ell:
        out = extend_power(out, list(range(out.layout.k)))
    return out

