"""Unit tests for the integer ledgers and the mechanical inequality checks."""

from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from angleopt import (
    DomainError,
    FalsificationError,
    LemmaReport,
    balanced_partition,
    error_term,
    f_dn,
    f_dnk,
    pair_count,
    partition_oracle,
    verify_comparison_lemma,
)


class TestBalancedPartition:
    def test_even_split(self):
        assert balanced_partition(2, 6) == (2, 2, 2)

    def test_remainder_goes_to_leading_parts(self):
        assert balanced_partition(2, 7) == (3, 2, 2)
        assert balanced_partition(2, 8) == (3, 3, 2)

    def test_fewer_points_than_parts_drops_zeros(self):
        assert balanced_partition(3, 2) == (1, 1)
        assert balanced_partition(2, 0) == ()

    def test_single_part(self):
        assert balanced_partition(0, 4) == (4,)

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            balanced_partition(-1, 4)
        with pytest.raises(DomainError):
            balanced_partition(2, -1)


class TestPairCount:
    def test_small(self):
        assert pair_count((2, 2)) == 4
        assert pair_count((3, 1)) == 3
        assert pair_count((4,)) == 0
        assert pair_count(()) == 0

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            pair_count((2, -1))


class TestFdn:
    # cross-pair counts of balanced partitions, computed by hand
    @pytest.mark.parametrize(
        "d,n,expected",
        [
            (1, 2, 1),
            (1, 3, 2),
            (1, 4, 4),
            (1, 5, 6),
            (2, 3, 3),
            (2, 4, 5),
            (2, 5, 8),
            (2, 6, 12),
            (2, 7, 16),
            (3, 4, 6),
            (3, 5, 9),
            (0, 5, 0),
            (2, 0, 0),
            (2, 1, 0),
        ],
    )
    def test_values(self, d, n, expected):
        assert f_dn(d, n) == expected

    def test_matches_balanced_pair_count(self):
        for d in range(1, 6):
            for n in range(0, 30):
                assert f_dn(d, n) == pair_count(balanced_partition(d, n))

    def test_matches_partition_oracle(self):
        for d in range(1, 5):
            for n in range(0, 13):
                opt = partition_oracle(d, n)
                assert f_dn(d, n) == opt.value
                assert sorted(opt.parts, reverse=True) == list(
                    balanced_partition(d, n)
                )

    def test_increment_structure(self):
        # adding the (n+1)-th point creates n - floor(n/(d+1)) new cross pairs
        for d in range(1, 5):
            for n in range(0, 25):
                assert f_dn(d, n + 1) - f_dn(d, n) == n - n // (d + 1)

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            f_dn(-1, 4)
        with pytest.raises(DomainError):
            f_dn(2, -1)

    @given(st.integers(min_value=1, max_value=8), st.integers(min_value=0, max_value=60))
    @settings(max_examples=150, deadline=None)
    def test_oracle_agreement_property(self, d, n):
        assert f_dn(d, n) == pair_count(balanced_partition(d, n))


class TestFdnk:
    def test_decomposition(self):
        for d in range(1, 5):
            for n in range(2, 16):
                for k in range(0, n + 1):
                    assert f_dnk(d, n, k) == f_dn(d - 1, k) + k * (n - k)

    def test_k_zero_and_k_n(self):
        assert f_dnk(2, 7, 0) == 0
        assert f_dnk(2, 7, 7) == f_dn(1, 7)

    def test_rejects_k_out_of_range(self):
        with pytest.raises(DomainError):
            f_dnk(2, 5, 6)
        with pytest.raises(DomainError):
            f_dnk(2, 5, -1)

    def test_oracle_with_pinned_split(self):
        # brute force: best split of k points into d parts plus the k(n-k) cross term
        for d in range(1, 4):
            for n in range(2, 11):
                for k in range(0, n + 1):
                    best = partition_oracle(d - 1, k).value if d >= 1 else 0
                    assert f_dnk(d, n, k) == best + k * (n - k)


class TestErrorTerm:
    def test_exactness_small(self):
        for d in range(1, 5):
            for n in range(1, 15):
                k = -((-d * n) // (d + 1))  # ceil(dn/(d+1))
                if k >= n:
                    continue
                res = error_term(d, n, k)
                assert res.e == sum(Fraction(m % d, d) for m in range(k, n))
                assert 0 <= res.e <= n - k
                assert res.e_avg == res.e / (n - k)

    def test_bounds_at_critical_k(self):
        for d in range(1, 7):
            for n in range(d + 2, 40):
                k = -((-d * n) // (d + 1))
                if k >= n:
                    continue
                res = error_term(d, n, k)
                r = n - (d + 1) * (n // (d + 1))
                assert res.e_avg <= Fraction(d + r - 1, 2 * d)
                assert res.e_avg < Fraction(d, 2 * (d + 1)) + (
                    Fraction(k) - Fraction(d * n, d + 1)
                )

    def test_rejects_out_of_range(self):
        with pytest.raises(DomainError):
            error_term(2, 5, 5)  # k must leave at least one m in [k, n)
        with pytest.raises(DomainError):
            error_term(0, 5, 2)


class TestVerifyComparisonLemma:
    def test_small_sweep_all_pass(self):
        report = verify_comparison_lemma(3, 12)
        assert isinstance(report, LemmaReport)
        assert report.all_pass
        assert not report.failures()
        counts = report.counts()
        assert counts["strict_inequality"] > 0
        assert counts["monotonicity"] > 0
        assert counts["floor_ceiling_equality"] > 0

    def test_strict_inequality_manually(self):
        # spot check: d=2, n=7, k=ceil(14/3)=5
        lhs = f_dn(2, 2) + f_dn(1, 7)
        rhs = f_dnk(2, 7, 5)
        assert lhs < rhs

    def test_monotone_in_k(self):
        for d in range(1, 4):
            for n in range(3, 14):
                k0 = -((-d * n) // (d + 1))
                vals = [f_dnk(d, n, k) for k in range(k0, n + 1)]
                assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_csv_output(self, tmp_path):
        report = verify_comparison_lemma(2, 8)
        path = tmp_path / "checks.csv"
        report.write_csv(path)
        text = path.read_text()
        lines = text.strip().split("\n")
        assert lines[0] == "d,n,k,lhs,rhs,check_name,pass"
        assert len(lines) == 1 + len(report.checks)
        assert all(line.endswith(",true") for line in lines[1:])

    def test_rejects_bad_bounds(self):
        with pytest.raises(DomainError):
            verify_comparison_lemma(0, 10)
        with pytest.raises(DomainError):
            verify_comparison_lemma(2, 1)


class TestFalsificationPath:
    def test_error_term_never_raises_in_range(self):
        # raising would mean the closed-form bound itself failed
        for d in range(1, 6):
            for n in range(d + 2, 30):
                k = -((-d * n) // (d + 1))
                if k < n:
                    error_term(d, n, k)

    def test_falsification_error_is_runtime_error(self):
        assert issubclass(FalsificationError, RuntimeError)
