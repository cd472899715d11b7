"""Layouts, transversal sets, adjacency, verification, serialization."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xorkneser.setsystem import (
    Family,
    FamilyParseError,
    Layout,
    TransversalSet,
    decode,
    degree,
    encode,
    from_json,
    pad_blocks,
    to_json,
    verify_family,
    xor_adjacent,
)
from xorkneser.constructions import construct_f2_lower


def oracle_disjoint_blocks(a, b, ell, n):
    """Count blocks where the index sets are disjoint, straight from sets."""
    count = 0
    for i in range(ell):
        block = set(range(i * n, (i + 1) * n))
        if not (set(a) & set(b) & block):
            count += 1
    return count


def random_transversal(rng, layout):
    picks = []
    for i in range(layout.ell):
        block = list(layout.block_range(i))
        picks.extend(rng.choice(block, size=layout.k, replace=False))
    return TransversalSet.from_indices(layout, picks)


class TestLayout:
    def test_basic_fields(self):
        lo = Layout(3, 4, 2)
        assert lo.size == 12
        assert lo.block_of(0) == 0 and lo.block_of(7) == 1 and lo.block_of(11) == 2
        assert list(lo.block_range(1)) == [4, 5, 6, 7]

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            Layout(0, 3, 1)
        with pytest.raises(ValueError):
            Layout(2, 3, 4)  # k > n
        with pytest.raises(ValueError):
            Layout(2, 0, 1)

    def test_degenerate_k_equals_n(self):
        lo = Layout(2, 2, 2)
        s = TransversalSet.from_indices(lo, [0, 1, 2, 3])
        assert s.is_uniform()


class TestTransversalSet:
    def test_from_indices_round_trip(self):
        lo = Layout(2, 4, 2)
        s = TransversalSet.from_indices(lo, [5, 0, 2, 4])
        assert s.indices == (0, 2, 4, 5)
        assert s.block_indices(0) == (0, 2)
        assert s.block_indices(1) == (4, 5)

    def test_rejects_out_of_range_and_duplicates(self):
        lo = Layout(2, 4, 2)
        with pytest.raises(ValueError):
            TransversalSet.from_indices(lo, [0, 8])
        with pytest.raises(ValueError):
            TransversalSet.from_indices(lo, [0, 0])


class TestXorAdjacent:
    def test_self_is_never_adjacent(self):
        lo = Layout(2, 4, 2)
        s = TransversalSet.from_indices(lo, [0, 1, 4, 5])
        assert xor_adjacent(s, s) is False

    def test_single_block_reduces_to_kneser(self):
        lo = Layout(1, 5, 2)
        s = TransversalSet.from_indices(lo, [0, 1])
        t = TransversalSet.from_indices(lo, [2, 3])
        u = TransversalSet.from_indices(lo, [1, 2])
        assert xor_adjacent(s, t) is True
        assert xor_adjacent(s, u) is False

    def test_two_singleton_blocks(self):
        # the four vertices of the product of two 2-vertex complete graphs
        lo = Layout(2, 2, 1)
        s = TransversalSet.from_indices(lo, [0, 2])
        t = TransversalSet.from_indices(lo, [1, 2])
        w = TransversalSet.from_indices(lo, [1, 3])
        assert xor_adjacent(s, t) is True  # disjoint in block 0 only
        assert xor_adjacent(s, w) is False  # disjoint in both blocks

    def test_layout_mismatch_rejected(self):
        s = TransversalSet.from_indices(Layout(1, 4, 2), [0, 1])
        t = TransversalSet.from_indices(Layout(1, 5, 2), [0, 1])
        with pytest.raises(ValueError):
            xor_adjacent(s, t)
        with pytest.raises(ValueError):
            xor_adjacent(s, s, Layout(2, 2, 1))

    @pytest.mark.parametrize("n,k", [(4, 1), (5, 2), (6, 3), (8, 3)])
    def test_kneser_agreement_exhaustive(self, n, k):
        lo = Layout(1, n, k)
        verts = [
            TransversalSet.from_indices(lo, c)
            for c in itertools.combinations(range(n), k)
        ]
        for s, t in itertools.combinations(verts, 2):
            assert xor_adjacent(s, t) == (set(s.indices).isdisjoint(t.indices))

    def test_symmetry_on_random_pairs(self):
        rng = np.random.default_rng(5)
        lo = Layout(3, 5, 2)
        for _ in range(200):
            s, t = random_transversal(rng, lo), random_transversal(rng, lo)
            assert xor_adjacent(s, t) == xor_adjacent(t, s)
            expected = oracle_disjoint_blocks(s.indices, t.indices, 3, 5) % 2 == 1
            if s.bits != t.bits:
                assert xor_adjacent(s, t) == expected


class TestVerifyFamily:
    def test_empty_family_is_valid(self):
        f = Family.from_members(Layout(2, 3, 1), [])
        report = verify_family(f)
        assert report.valid and report.violation is None
        assert f.verified

    def test_construction_output_is_valid(self):
        assert verify_family(construct_f2_lower(8, 2)).valid

    def test_pair_sharing_all_blocks_is_invalid(self):
        lo = Layout(2, 4, 2)
        f = Family.from_index_lists(lo, [[0, 1, 4, 5], [0, 2, 4, 5]])
        report = verify_family(f)
        assert not report.valid
        assert report.violation.kind == "adjacency"
        assert report.violation.members == (0, 1)
        assert report.violation.disjoint_blocks == 0
        assert not f.verified

    def test_malformed_member_reported_not_raised(self):
        lo = Layout(2, 4, 2)
        f = Family.from_index_lists(lo, [[0, 1, 2, 4]])  # 3 in block 0, 1 in block 1
        report = verify_family(f)
        assert not report.valid
        assert report.violation.kind == "uniformity"
        assert report.violation.members == (0, 0)

    def test_first_violating_pair_reported(self):
        lo = Layout(1, 6, 2)
        # (0,1)-(0,2) intersect: invalid at the first pair in canonical order
        f = Family.from_index_lists(lo, [[0, 1], [0, 2], [4, 5]])
        report = verify_family(f)
        assert report.violation.members == (0, 1)

    @given(st.integers(0, 10**9), st.integers(2, 12))
    @settings(max_examples=40, deadline=None)
    def test_agrees_with_definition_oracle(self, seed, count):
        rng = np.random.default_rng(seed)
        lo = Layout(2, 4, 2)
        members = {random_transversal(rng, lo).bits for _ in range(count)}
        f = Family.from_members(lo, [TransversalSet(lo, b) for b in members])
        expected = all(
            oracle_disjoint_blocks(s.indices, t.indices, 2, 4) % 2 == 1
            for s, t in itertools.combinations(f.members, 2)
        )
        assert verify_family(f).valid == expected


class TestFamily:
    def test_members_canonically_sorted(self):
        lo = Layout(1, 6, 2)
        f = Family.from_index_lists(lo, [[4, 5], [0, 1], [2, 3]])
        assert [m.indices for m in f.members] == [(0, 1), (2, 3), (4, 5)]

    def test_duplicates_rejected(self):
        lo = Layout(1, 4, 2)
        with pytest.raises(ValueError):
            Family.from_index_lists(lo, [[0, 1], [1, 0]])

    def test_layout_mixing_rejected(self):
        lo, other = Layout(1, 4, 2), Layout(1, 5, 2)
        member = TransversalSet.from_indices(other, [0, 1])
        with pytest.raises(ValueError):
            Family.from_members(lo, [member])


class TestDegree:
    def test_empty_family(self):
        f = Family.from_members(Layout(2, 3, 1), [])
        assert degree(f, 0) == 0

    def test_counts_incidences(self):
        f = construct_f2_lower(8, 2)
        for e in range(4):  # the 2k labelled points of block A
            oracle = sum(1 for m in f.members if e in m.indices)
            assert degree(f, e) == oracle
            assert degree(f, e) >= 1

    def test_pairwise_disjoint_in_b_means_degree_at_most_one(self):
        lo = Layout(2, 6, 2)
        f = Family.from_index_lists(lo, [[0, 1, 6, 7], [0, 2, 8, 9], [1, 2, 10, 11]])
        for e in range(6, 12):
            assert degree(f, e) <= 1

    def test_out_of_range(self):
        f = Family.from_members(Layout(2, 3, 1), [])
        with pytest.raises(IndexError):
            degree(f, 6)


class TestSerialization:
    def test_empty_family_encodes_to_header(self):
        f = Family.from_members(Layout(2, 5, 2), [])
        assert encode(f) == "2 5 2\n"
        assert decode(encode(f)) == f

    def test_round_trip_construction(self):
        f = construct_f2_lower(8, 2)
        again = decode(encode(f))
        assert again == f
        assert verify_family(again).valid

    def test_json_round_trip(self):
        f = construct_f2_lower(8, 2)
        assert from_json(to_json(f)) == f

    @given(st.integers(0, 10**9), st.integers(0, 8))
    @settings(max_examples=30, deadline=None)
    def test_round_trip_random(self, seed, count):
        rng = np.random.default_rng(seed)
        lo = Layout(2, 5, 2)
        members = {random_transversal(rng, lo).bits for _ in range(count)}
        f = Family.from_members(lo, [TransversalSet(lo, b) for b in members])
        assert decode(encode(f)) == f
        assert from_json(to_json(f)) == f

    def test_parse_error_reports_position(self):
        with pytest.raises(FamilyParseError) as exc:
            decode("2 5\n")
        assert exc.value.line == 1
        with pytest.raises(FamilyParseError) as exc:
            decode("2 5 2\n0 x 5 6\n")
        assert exc.value.line == 2 and exc.value.field == 2
        with pytest.raises(FamilyParseError):
            decode("")
        with pytest.raises(FamilyParseError):
            decode("2 5 2\n0 1 99 100\n")

    def test_json_errors(self):
        with pytest.raises(FamilyParseError):
            from_json("[1, 2]")
        with pytest.raises(FamilyParseError):
            from_json('{"ell": 2, "n": 5, "k": 2}')
        with pytest.raises(FamilyParseError):
            from_json("{not json")


class TestPadBlocks:
    def test_padding_preserves_validity_and_size(self):
        f = construct_f2_lower(8, 2)
        g = pad_blocks(f, 11)
        assert g.layout.n == 11 and len(g) == len(f)
        assert verify_family(g).valid

    def test_shrink_rejected(self):
        f = construct_f2_lower(8, 2)
        with pytest.raises(ValueError):
            pad_blocks(f, 7)
