import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vcwidth import bounds as B
from vcwidth.bounds import DomainError, NetworkShape

from oracles import bisect, crossover_scan
from reference_tables import TABLE_K, TABLE_RANGES


class TestCounts:
    @pytest.mark.parametrize("n,m,expected", [(9, 4, 45), (1, 1, 4), (21, 1, 24)])
    def test_total_weights(self, n, m, expected):
        assert B.total_weights(NetworkShape(n, m)) == expected

    @pytest.mark.parametrize("m,expected", [(4, 5), (1, 2), (31, 32)])
    def test_computational_units(self, m, expected):
        assert B.computational_units(NetworkShape(3, m)) == expected

    def test_capacity_counts(self):
        c = B.CapacityCounts.of(NetworkShape(9, 4))
        assert (c.w_total, c.c_units) == (45, 5)

    @pytest.mark.parametrize("n,m", [(0, 1), (1, 0), (-3, 2)])
    def test_invalid_shape(self, n, m):
        with pytest.raises(DomainError):
            NetworkShape(n, m)

    @pytest.mark.parametrize("n,m,expected", [(9, 0, 1), (9, 1, 24), (14, 2, 99)])
    def test_q_poly(self, n, m, expected):
        assert B.q_poly(n, m) == expected


class TestVcBounds:
    @pytest.mark.parametrize("n,m,expected", [(8, 7, 8.0), (8, 3, 0.0), (16, 15, 64.0)])
    def test_lower(self, n, m, expected):
        assert B.vc_lower_bound(NetworkShape(n, m)) == pytest.approx(expected, abs=1e-12)

    # high-precision evaluation of (W C)^2 + 11 W C log2(18 W C^2)
    @pytest.mark.parametrize("n,m,expected", [
        (1, 1, 782.953400126923),
        (9, 1, 3151.29030057116),
        (9, 2, 13765.3296768367),
        (16, 15, 19766838.9235452),
    ])
    def test_upper(self, n, m, expected):
        assert B.vc_upper_bound(NetworkShape(n, m)) == pytest.approx(expected, rel=1e-12)

    def test_upper_grows_with_width(self):
        assert B.vc_upper_bound(NetworkShape(9, 2)) > B.vc_upper_bound(NetworkShape(9, 1))

    def test_bracket_examples(self):
        lo, hi = B.vc_bracket(NetworkShape(16, 15))
        assert lo == pytest.approx(64.0) and lo < hi
        lo, hi = B.vc_bracket(NetworkShape(8, 3))
        assert lo == 0.0 and hi > 0

    def test_bracket_ordered_exhaustive(self):
        for n in range(1, 65):
            for m in range(1, 65):
                lo, hi = B.vc_bracket(NetworkShape(n, m))
                assert lo <= hi, (n, m)


class TestRoots:
    # bisection values at 1e-30 precision
    @pytest.mark.parametrize("n,r,expected", [
        (14, 214, 0.907979979826889),
        (22, 7200, 5.77145378316331),
        (9, 214, 0.970207687920205),
        (45, 7200, 5.4750990301921),
    ])
    def test_beta_frozen(self, n, r, expected):
        assert B.beta_root(n, r) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("n,r", [(5, 1), (14, 214), (22, 7200), (60, 10**7), (9, 3)])
    def test_beta_matches_bisection(self, n, r):
        c = 11 * (n / 2 - 2)
        ref = bisect(lambda q: 199 * q * q + c * q - r, 0.0, 1e4)
        assert B.beta_root(n, r) == pytest.approx(ref, rel=1e-9)

    @given(st.integers(5, 200), st.integers(1, 10**8))
    def test_beta_residual(self, n, r):
        b = B.beta_root(n, r)
        assert b > 0
        assert abs(199 * b * b + 11 * (n / 2 - 2) * b - r) < 1e-6 * r

    @pytest.mark.parametrize("n,r", [(4, 10), (3, 10), (9, 0), (9, -5)])
    def test_beta_domain(self, n, r):
        with pytest.raises(DomainError):
            B.beta_root(n, r)

    def test_lower_bound_tiny_when_beta_below_one(self):
        assert B.lower_width_bound(14, 214) == pytest.approx(0.0, abs=1e-8)
        assert B.width_range(14, 214).lo == 1

    def test_lower_bound_thyroid(self):
        # bisection on Q(m) = beta with beta = 5.77145378316331
        assert B.lower_width_bound(22, 7200) == pytest.approx(0.164788964589935, rel=1e-7)
        assert B.width_range(22, 7200).lo == 1

    @given(st.integers(5, 200), st.integers(1, 10**8))
    def test_lower_root_residual(self, n, r):
        lm = B.lower_width_bound(n, r)
        gamma = B.choose_gamma(B.beta_root(n, r))
        assert lm >= 0
        assert abs(B.q_poly(n, lm) - gamma) < 1e-6 * max(1.0, gamma)

    @given(st.floats(0.0, 1e6))
    def test_gamma_admissible(self, beta):
        g = B.choose_gamma(beta)
        assert g > beta and g > 1


class TestUpperBounds:
    @pytest.mark.parametrize("n,r,expected", [(9, 214, 379.4444444), (22, 7200, 373.02597),
                                              (15, 178, 26.12381)])
    def test_k1(self, n, r, expected):
        assert B.k1(n, r) == pytest.approx(expected, rel=1e-7)

    @pytest.mark.parametrize("n,expected", [(9, 4.656854249), (12, 15.0), (14, 31.0)])
    def test_k2(self, n, expected):
        assert B.k2(n) == pytest.approx(expected, rel=1e-9)

    @pytest.mark.parametrize("n,r,expected", [(14, 214, 31.0), (15, 214, 31.60952381),
                                              (23, 7200, 332.91304)])
    def test_upper_width_bound(self, n, r, expected):
        assert B.upper_width_bound(n, r) == pytest.approx(expected, rel=1e-7)

    @pytest.mark.parametrize("fn", [lambda: B.k1(8, 100), lambda: B.k2(8), lambda: B.upper_width_bound(3, 10),
                                    lambda: B.width_range(8, 100), lambda: B.lub_sample_size(8)])
    def test_domain(self, fn):
        with pytest.raises(DomainError):
            fn()

    @given(st.integers(9, 120), st.integers(1, 10**6))
    def test_monotone_in_r(self, n, r):
        assert B.k1(n, r + 1) > B.k1(n, r)
        assert B.upper_width_bound(n, r + 1) >= B.upper_width_bound(n, r)

    @given(st.integers(9, 300))
    def test_k2_increasing(self, n):
        assert B.k2(n + 1) > B.k2(n)

    @given(st.integers(9, 120), st.integers(1, 10**6))
    def test_upper_is_min(self, n, r):
        assert B.upper_width_bound(n, r) == min(B.k1(n, r), B.k2(n))


class TestWidthRange:
    @pytest.mark.parametrize("n,r,lo,hi", [(14, 214, 1, 31), (45, 7200, 1, 68), (20, 178, 1, 10),
                                           (9, 214, 1, 4), (13, 178, 1, 21), (21, 7200, 1, 361)])
    def test_examples(self, n, r, lo, hi):
        wb = B.width_range(n, r)
        assert (wb.lo, wb.hi) == (lo, hi)
        assert not wb.empty

    def test_empty_bracket_is_flagged(self):
        wb = B.width_range(42, 178)
        assert wb.k1 == pytest.approx(0.9943978, rel=1e-6)
        assert (wb.lo, wb.hi) == (1, 0)
        assert wb.empty and wb.label() == "0" and wb.vc is None

    def test_negative_k1_kept(self):
        wb = B.width_range(58, 178)
        assert wb.k1 < 0 and wb.L_m == wb.k1 and wb.empty

    def test_vc_attached(self):
        wb = B.width_range(14, 214)
        assert wb.vc == B.vc_bracket(NetworkShape(14, 31))

    @given(st.integers(9, 90), st.integers(1, 10**6))
    @settings(max_examples=300)
    def test_ordering(self, n, r):
        wb = B.width_range(n, r)
        assert wb.l_m >= 0
        assert wb.lo == max(1, math.ceil(wb.l_m))
        assert wb.hi == math.floor(wb.L_m)
        if not wb.empty:
            assert wb.l_m < wb.L_m
            assert wb.lo <= wb.hi


class TestCrossover:
    @pytest.mark.parametrize("r,expected", [(214, 14), (178, 14), (7200, 21)])
    def test_examples(self, r, expected):
        assert B.crossover_attribute_size(r) == expected

    @given(st.integers(1, 10**7))
    def test_matches_direct_comparison(self, r):
        assert B.crossover_attribute_size(r) == crossover_scan(r)

    def test_no_crossover(self):
        # at n = 9: 9 * 2**2.5 * 0.5 = 25.46 > 8r for r = 3
        assert B.crossover_attribute_size(3) is None

    @pytest.mark.parametrize("r", [178, 214, 7200, 50_000])
    def test_consistency_with_upper_bound(self, r):
        N = B.crossover_attribute_size(r)
        for n in range(9, N + 1):
            assert B.upper_width_bound(n, r) == B.k2(n)
        n = N + 1
        while B.k1(n, r) > 0:
            assert B.upper_width_bound(n, r) == B.k1(n, r)
            n += 1


class TestLubSampleSize:
    @pytest.mark.parametrize("n,expected", [(10, 10.0), (16, 512.0)])
    def test_examples(self, n, expected):
        assert B.lub_sample_size(n) == pytest.approx(expected)

    @pytest.mark.parametrize("n", range(10, 25, 2))
    def test_k1_meets_k2(self, n):
        r = round(B.lub_sample_size(n))
        assert abs(B.k1(n, r) - B.k2(n)) / B.k2(n) < 0.02


class TestBoundsTable:
    def test_glass_head_matches_reference(self):
        for row in B.bounds_table(214, 9, 13):
            k1, k2, L = TABLE_K[214][row.n]
            assert round(row.k1, 4) == pytest.approx(round(k1, 4))
            assert round(row.k2, 4) == pytest.approx(round(k2, 4))
            assert round(row.L_m, 4) == pytest.approx(round(L, 4))

    def test_thyroid_ranges(self):
        for row in B.bounds_table(7200, 22, 30):
            assert row.label() == TABLE_RANGES[7200][row.n]

    def test_wine_empty_row(self):
        (row,) = B.bounds_table(178, 42, 42)
        assert row.k1 == pytest.approx(0.9943978, rel=1e-6)
        assert row.empty and row.hi == 0 and row.lo == 1

    def test_domain(self):
        with pytest.raises(DomainError):
            B.bounds_table(214, 8, 20)
        with pytest.raises(DomainError):
            B.bounds_table(214, 20, 10)
