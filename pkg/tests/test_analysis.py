"""Slack function, closed-form bounds, matchings, peeling, sampling."""

from fractions import Fraction
from math import comb

import pytest

from xorkneser.setsystem import Family, Layout
from xorkneser.constructions import construct_f2_lower, disjoint_family
from xorkneser.analysis import (
    CrossMatching,
    best_construction,
    bound_rows,
    combined_upper,
    complementary_pair_matching,
    degree_dichotomy,
    gamma,
    gamma_for_upper,
    lower_c2,
    max_cross_matching_weight,
    peel,
    permutation_type_mc,
    power_lower,
    power_upper,
    power_upper_quoted,
    rows_to_csv,
    t1_bounds,
    upper_c2,
    verify_matching,
)


class TestGamma:
    def test_exact_identities(self):
        assert gamma(2) == 0
        assert gamma(3) == Fraction(1, 3)

    def test_quoted_decimal_bounds(self):
        assert gamma(4) < Fraction(44, 100)
        assert gamma(5) < Fraction(36, 100)

    def test_strictly_decreasing_from_five(self):
        values = [gamma(k) for k in range(5, 31)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_upper_variant_overrides_only_k2(self):
        assert gamma_for_upper(2) == Fraction(1, 3)
        for k in (3, 4, 7):
            assert gamma_for_upper(k) == gamma(k)

    def test_domain(self):
        with pytest.raises(ValueError):
            gamma(1)


class TestClosedForms:
    def test_two_block_surplus(self):
        assert lower_c2(2) == 4
        assert lower_c2(1) == 0
        assert lower_c2(3) == 27

    def test_two_block_ceiling(self):
        assert upper_c2(8, 2) == Fraction(20)
        assert upper_c2(9, 3) == 3 + Fraction(4, 3) * 3 * 20
        with pytest.raises(ValueError):
            upper_c2(5, 1)

    def test_k1_sandwich_bounds(self):
        assert t1_bounds(3, 4) == (3, 9)
        assert t1_bounds(5, 3) == (8, 13)
        with pytest.raises(ValueError):
            t1_bounds(3, 2)

    def test_power_upper_chain(self):
        assert power_upper(7, 3, 1) == 2          # floor(7/3)
        assert power_upper(5, 2, 2) == 10         # 2n
        assert power_upper(3, 1, 3) == 18         # 2 n^2 / k
        assert power_upper(3, 2, 3) == 9          # floor(2*9/2)
        assert power_upper(4, 2, 4) == 128        # 2*4*n^2
        assert power_upper(4, 2, 5) == 2 * 4 * 4**3 // 2

    def test_quoted_form_never_sharper(self):
        for ell in range(1, 8):
            for n in (3, 5, 8):
                for k in (1, 2, 3):
                    if k <= n:
                        assert power_upper(n, k, ell) <= power_upper_quoted(n, k, ell)

    def test_power_lower(self):
        assert power_lower(9, 3, 3) == 9
        assert power_lower(8, 2, 3) == 16
        assert power_lower(4, 1, 3) is None  # k below floor(log2(ell+1))
        assert power_lower(9, 3, 1) == 3


class TestVerifyMatching:
    def test_complementary_pairs_k2_attain_equality(self):
        rep = verify_matching(complementary_pair_matching(2))
        assert rep.valid
        assert rep.weight == 6 == comb(4, 2)
        assert rep.bound == Fraction(6)
        assert rep.within_bound

    def test_complementary_pairs_k3(self):
        rep = verify_matching(complementary_pair_matching(3))
        assert rep.valid and rep.weight == 20 and rep.within_bound

    def test_single_group_invalid(self):
        rep = verify_matching(CrossMatching.from_lists(2, [[{0, 1}, {2, 3}]]))
        assert not rep.valid
        assert any("need at least 2" in p for p in rep.problems)

    def test_small_group_invalid(self):
        m = CrossMatching.from_lists(2, [[{0, 1}, {2, 3}], [{0, 2}]])
        assert not verify_matching(m).valid

    def test_intersecting_within_group_invalid(self):
        m = CrossMatching.from_lists(2, [[{0, 1}, {1, 2}], [{0, 2}, {1, 3}]])
        rep = verify_matching(m)
        assert not rep.valid

    def test_disjoint_across_groups_invalid(self):
        m = CrossMatching.from_lists(2, [[{0, 1}, {2, 3}], [{4, 5}, {0, 2}]])
        rep = verify_matching(m)
        assert not rep.valid

    def test_wrong_uniformity_invalid(self):
        m = CrossMatching.from_lists(2, [[{0, 1, 2}, {3, 4}], [{0, 3}, {1, 4}]])
        assert not verify_matching(m).valid


class TestExhaustiveWeightSearch:
    @pytest.mark.parametrize("ground", [4, 5, 6])
    def test_no_matching_beats_the_bound(self, ground):
        weight, best = max_cross_matching_weight(ground, 2)
        assert weight == 6
        assert weight <= (1 + gamma(2)) * comb(4, 2)
        assert best is not None and best.sizes == (2, 2, 2)

    def test_tiny_ground_has_no_matching(self):
        weight, best = max_cross_matching_weight(3, 2)
        assert weight == 0 and best is None


class TestPeel:
    def test_pairwise_b_disjoint_stops_immediately(self):
        lo = Layout(2, 6, 2)
        f = Family.from_index_lists(lo, [[0, 1, 6, 7], [0, 2, 8, 9], [1, 2, 10, 11]])
        tr = peel(f)
        assert tr.q == 0 and len(tr.residual) == len(f)
        assert tr.accounting_ok and not tr.b_degree_exceeded

    @pytest.mark.parametrize("n,k", [(8, 2), (40, 2), (81, 3)])
    def test_traces_form_valid_matchings(self, n, k):
        f = construct_f2_lower(n, k)
        tr = peel(f)
        assert tr.q >= 2
        assert len(f) == len(tr.residual) + sum(
            len(r.extracted) + len(r.collateral) for r in tr.rounds
        )
        assert tr.accounting_ok
        rep = verify_matching(tr.matching(k))
        assert rep.valid
        assert rep.weight <= (1 + gamma(k)) * comb(2 * k, k)

    def test_extracted_members_share_pivot_and_split_a(self):
        f = construct_f2_lower(8, 2)
        tr = peel(f)
        for r in tr.rounds:
            for m in r.extracted:
                assert r.pivot in m.indices
            a_parts = [set(m.block_indices(0)) for m in r.extracted]
            for i in range(len(a_parts)):
                for j in range(i + 1, len(a_parts)):
                    assert not a_parts[i] & a_parts[j]

    def test_b_degree_flag(self):
        lo = Layout(2, 3, 1)
        f = Family.from_index_lists(lo, [[0, 3], [1, 3]])
        tr = peel(f)
        assert tr.b_degree_exceeded  # degree 2 > k = 1
        assert tr.q == 1 and not tr.residual

    def test_requires_two_blocks(self):
        with pytest.raises(ValueError):
            peel(disjoint_family(6, 2))


class TestDegreeDichotomy:
    def test_large_construction_satisfies_it(self):
        f = construct_f2_lower(40, 2)
        assert len(f) > 2 * 2**3
        assert degree_dichotomy(f) is True

    def test_b_degrees_at_most_one(self):
        lo = Layout(2, 8, 1)
        f = Family.from_index_lists(lo, [[0, 8 + i] for i in range(8)])
        assert degree_dichotomy(f) is True

    def test_small_family_inapplicable(self):
        f = construct_f2_lower(8, 2)  # 8 members, not above 2k^3 = 16
        assert degree_dichotomy(f) is None

    def test_requires_two_blocks(self):
        with pytest.raises(ValueError):
            degree_dichotomy(disjoint_family(6, 2))


class TestPermutationTypeMC:
    def test_reproducible_for_fixed_seed(self):
        m = complementary_pair_matching(2)
        a = permutation_type_mc(m, 2000, seed=11)
        b = permutation_type_mc(m, 2000, seed=11)
        assert a == b
        c = permutation_type_mc(m, 2000, seed=12)
        assert c.counts != a.counts

    def test_extremal_matching_every_sample_is_typed(self):
        st = permutation_type_mc(complementary_pair_matching(2), 5000, seed=3)
        assert st.typeless == 0
        assert sum(st.counts) == 5000

    def test_pair_probability_sanity(self):
        m = CrossMatching.from_lists(2, [[{0, 1}, {2, 3}], [{0, 2}, {1, 3}]])
        st = permutation_type_mc(m, 100_000, seed=2024)
        p = Fraction(2, comb(4, 2))  # exact per-group probability here
        se = (float(p) * (1 - float(p)) / st.samples) ** 0.5
        for est in st.estimates:
            assert abs(est - float(p)) <= 3 * se

    def test_estimates_sum_at_most_one(self):
        st = permutation_type_mc(complementary_pair_matching(3), 20_000, seed=5)
        assert sum(st.estimates) <= 1.0 + 1e-12

    def test_guards(self):
        m = complementary_pair_matching(2)
        with pytest.raises(ValueError):
            permutation_type_mc(m, 0, seed=1)
        bad = CrossMatching.from_lists(2, [[{0, 1}, {2, 3}]])
        with pytest.raises(ValueError):
            permutation_type_mc(bad, 10, seed=1)


class TestBoundTable:
    def test_combined_upper_cases(self):
        assert combined_upper(8, 2, 1) == 4
        assert combined_upper(8, 2, 2) == 16  # chain 2n beats the two-block ceiling 20
        assert combined_upper(8, 1, 3) == 3 * 8 - 3 + 1
        assert combined_upper(9, 3, 3) == power_upper(9, 3, 3)

    def test_best_construction_picks_the_right_witness(self):
        size, name, fam = best_construction(8, 2, 2)
        assert name == "pair-lattice" and size == 8
        size, name, fam = best_construction(3, 1, 4)
        assert name == "plane" and size == 9
        size, name, fam = best_construction(5, 1, 7)
        assert name == "core" and size == 5 * 7 - 14
        size, name, fam = best_construction(9, 3, 3)
        assert name == "matrix" and size == 9
        size, name, fam = best_construction(6, 2, 1)
        assert name == "disjoint" and size == 3

    def test_rows_satisfy_sandwich(self):
        rows = bound_rows([2], range(2, 7), [1, 2])
        for row in rows:
            assert row["lower_construction"] <= row["exact_or_lb"] <= row["upper_formula"]

    def test_csv_shape(self):
        rows = bound_rows([3], [2, 3], [1])
        text = rows_to_csv(rows)
        lines = text.strip().splitlines()
        assert lines[0] == "ell,n,k,lower_construction,exact_or_lb,upper_formula,tight?"
        assert len(lines) == 3

    def test_vertex_budget_falls_back_to_lower_bound(self):
        rows = bound_rows([2], [6], [2], vertex_budget=10)
        (row,) = rows
        assert isinstance(row["exact_or_lb"], str) and row["exact_or_lb"].startswith(">=")
