"""Block-transversal set systems and the xor adjacency predicate.

The universe consists of ``ell`` disjoint blocks of ``n`` consecutive
integers; element ``e`` belongs to block ``e // n``.  A transversal set
meets every block in exactly ``k`` elements.  Two transversals are
xor-adjacent when they are disjoint inside an odd number of blocks, and a
family is valid when every unordered pair of members is xor-adjacent.
Valid families are exactly the cliques of the xor-product of ``ell``
Kneser graphs KG(n, k).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator


def bit_indices(x: int) -> Iterator[int]:
    """Yield the positions of the set bits of x, ascending."""
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Layout:
    """Universe parameters: ell blocks of size n, uniformity k per block."""

    ell: int
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.ell < 1 or self.n < 1 or self.k < 1:
            raise ValueError(f"layout parameters must be positive: {self}")
        if self.k > self.n:
            raise ValueError(f"uniformity k={self.k} exceeds block size n={self.n}")

    @property
    def size(self) -> int:
        return self.ell * self.n

    def block_of(self, e: int) -> int:
        return e // self.n

    def block_range(self, i: int) -> range:
        return range(i * self.n, (i + 1) * self.n)

    def block_masks(self) -> tuple[int, ...]:
        ones = (1 << self.n) - 1
        return tuple(ones << (i * self.n) for i in range(self.ell))


@dataclass(frozen=True)
class TransversalSet:
    """A subset of the universe stored as a bit vector over a layout.

    The block-uniformity condition (k elements in every block) is an
    invariant of *valid* transversals, checked by :func:`verify_family`
    rather than enforced here, so that malformed members read from files
    can be reported instead of rejected at construction time.
    """

    layout: Layout
    bits: int

    @classmethod
    def from_indices(cls, layout: Layout, indices: Iterable[int]) -> "TransversalSet":
        bits = 0
        for e in indices:
            e = int(e)  # accept numpy integers and friends
            if not 0 <= e < layout.size:
                raise ValueError(f"element {e} outside universe of size {layout.size}")
            if bits >> e & 1:
                raise ValueError(f"duplicate element {e}")
            bits |= 1 << e
        return cls(layout, bits)

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(bit_indices(self.bits))

    def block_count(self, i: int) -> int:
        ones = (1 << self.layout.n) - 1
        return (self.bits >> (i * self.layout.n) & ones).bit_count()

    def block_indices(self, i: int) -> tuple[int, ...]:
        lo, hi = i * self.layout.n, (i + 1) * self.layout.n
        return tuple(e for e in bit_indices(self.bits) if lo <= e < hi)

    def is_uniform(self) -> bool:
        return all(self.block_count(i) == self.layout.k for i in range(self.layout.ell))


def _disjoint_blocks(a: int, b: int, masks: tuple[int, ...]) -> int:
    both = a & b
    return sum(1 for m in masks if not both & m)


def xor_adjacent(s: TransversalSet, t: TransversalSet, layout: Layout | None = None) -> bool:
    """True iff s and t are disjoint in an odd number of blocks."""
    lo = layout if layout is not None else s.layout
    if s.layout != lo or t.layout != lo:
        raise ValueError("transversal sets do not share the given layout")
    return _disjoint_blocks(s.bits, t.bits, lo.block_masks()) % 2 == 1


@dataclass(frozen=True)
class Family:
    """A canonically ordered family of distinct transversal sets.

    Members are sorted lexicographically on their index sequences.  The
    ``verified`` flag is set only by :func:`verify_family` and is ignored
    by equality.
    """

    layout: Layout
    members: tuple[TransversalSet, ...]
    verified: bool = field(default=False, compare=False)

    @classmethod
    def from_members(cls, layout: Layout, members: Iterable[TransversalSet]) -> "Family":
        canon = sorted(members, key=lambda m: m.indices)
        for m in canon:
            if m.layout != layout:
                raise ValueError("member layout differs from family layout")
        for a, b in zip(canon, canon[1:]):
            if a.bits == b.bits:
                raise ValueError(f"duplicate member {a.indices}")
        return cls(layout, tuple(canon))

    @classmethod
    def from_index_lists(cls, layout: Layout, lists: Iterable[Iterable[int]]) -> "Family":
        return cls.from_members(layout, (TransversalSet.from_indices(layout, xs) for xs in lists))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[TransversalSet]:
        return iter(self.members)

    def __getitem__(self, i: int) -> TransversalSet:
        return self.members[i]


@dataclass(frozen=True)
class Violation:
    """First failure found by the verifier.

    kind is "uniformity" (member indices equal) or "adjacency" (a pair
    disjoint in an even number of blocks, recorded in disjoint_blocks).
    """

    kind: str
    members: tuple[int, int]
    disjoint_blocks: int | None = None


@dataclass(frozen=True)
class VerifyReport:
    valid: bool
    violation: Violation | None = None


def verify_family(f: Family) -> VerifyReport:
    """Exhaustive pairwise validity check; reports the first violation."""
    masks = f.layout.block_masks()
    k = f.layout.k
    for i, m in enumerate(f.members):
        if any((m.bits & bm).bit_count() != k for bm in masks):
            return VerifyReport(False, Violation("uniformity", (i, i)))
    bits = [m.bits for m in f.members]
    for i in range(len(bits)):
        bi = bits[i]
        for j in range(i + 1, len(bits)):
            d = _disjoint_blocks(bi, bits[j], masks)
            if d % 2 == 0:
                return VerifyReport(False, Violation("adjacency", (i, j), d))
    object.__setattr__(f, "verified", True)
    return VerifyReport(True)


def degree(f: Family, e: int) -> int:
    """Number of members containing element e."""
    if not 0 <= e < f.layout.size:
        raise IndexError(f"element {e} outside universe of size {f.layout.size}")
    return sum(1 for m in f.members if m.bits >> e & 1)


class FamilyParseError(ValueError):
    """Malformed family text; carries 1-based line and field positions."""

    def __init__(self, line: int, field_no: int | None, message: str):
        self.line = line
        self.field = field_no
        where = f"line {line}" if field_no is None else f"line {line}, field {field_no}"
        super().__init__(f"{where}: {message}")


def encode(f: Family) -> str:
    """Serialize to the line-oriented text format.

    Line 1 is ``ell n k``; each further line is one member as sorted
    space-separated global indices.
    """
    lines = [f"{f.layout.ell} {f.layout.n} {f.layout.k}"]
    lines.extend(" ".join(str(e) for e in m.indices) for m in f.members)
    return "\n".join(lines) + "\n"


def decode(text: str) -> Family:
    """Parse the text format produced by :func:`encode`."""
    raw = text.splitlines()
    rows = [(no + 1, line) for no, line in enumerate(raw) if line.strip()]
    if not rows:
        raise FamilyParseError(1, None, "empty input, expected header 'ell n k'")
    head_no, head = rows[0]
    parts = head.split()
    if len(parts) != 3:
        raise FamilyParseError(head_no, None, f"header needs 3 fields, got {len(parts)}")
    vals = []
    for pos, p in enumerate(parts, start=1):
        try:
            vals.append(int(p))
        except ValueError:
            raise FamilyParseError(head_no, pos, f"not an integer: {p!r}") from None
    try:
        layout = Layout(*vals)
    except ValueError as exc:
        raise FamilyParseError(head_no, None, str(exc)) from None
    members = []
    for no, line in rows[1:]:
        indices = []
        for pos, p in enumerate(line.split(), start=1):
            try:
                indices.append(int(p))
            except ValueError:
                raise FamilyParseError(no, pos, f"not an integer: {p!r}") from None
        try:
            members.append(TransversalSet.from_indices(layout, indices))
        except ValueError as exc:
            raise FamilyParseError(no, None, str(exc)) from None
    return Family.from_members(layout, members)


def to_json(f: Family) -> str:
    """JSON mirror of the family file format."""
    obj = {
        "ell": f.layout.ell,
        "n": f.layout.n,
        "k": f.layout.k,
        "members": [list(m.indices) for m in f.members],
    }
    return json.dumps(obj)


def from_json(text: str) -> Family:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FamilyParseError(exc.lineno, exc.colno, exc.msg) from None
    if not isinstance(obj, dict):
        raise FamilyParseError(1, None, "top-level JSON value must be an object")
    for key in ("ell", "n", "k", "members"):
        if key not in obj:
            raise FamilyParseError(1, None, f"missing field {key!r}")
    try:
        layout = Layout(obj["ell"], obj["n"], obj["k"])
    except (TypeError, ValueError) as exc:
        raise FamilyParseError(1, None, str(exc)) from None
    if not isinstance(obj["members"], list):
        raise FamilyParseError(1, None, "'members' must be a list of index lists")
    try:
        return Family.from_index_lists(layout, obj["members"])
    except (TypeError, ValueError) as exc:
        raise FamilyParseError(1, None, str(exc)) from None


def pad_blocks(f: Family, new_n: int) -> Family:
    """Re-embed a family into blocks of size new_n >= n; new slots stay unused."""
    lo = f.layout
    if new_n < lo.n:
        raise ValueError(f"cannot shrink blocks from {lo.n} to {new_n}")
    if new_n == lo.n:
        return f
    layout = Layout(lo.ell, new_n, lo.k)
    remapped = [
        [e // lo.n * new_n + e % lo.n for e in m.indices] for m in f.members
    ]
    return Family.from_index_lists(layout, remapped)
