"""Error bounds, coefficient sums, and cost models."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracmem import (
    a_func,
    adaptive_bound,
    b_approx_bracket,
    b_func,
    fit_loglog_slope,
    fixed_memory_bound,
    op_count,
)
from fracmem.analysis import adaptive_bound_terms, interval_error_term, trapezoid_gap
from fracmem.memory import PolicyKind


class TestFixedBound:
    def test_half_order_example(self):
        # M=1, t=2, T=1, a=1/2: (sqrt(2)-1)/Gamma(3/2)
        got = fixed_memory_bound(1.0, 2.0, 1.0, 0.5)
        assert got == pytest.approx((math.sqrt(2.0) - 1.0) / math.gamma(1.5), rel=1e-14)
        assert got == pytest.approx(0.46738995, abs=1e-7)

    def test_zero_when_window_covers_everything(self):
        assert fixed_memory_bound(1.0, 3.0, 3.0, 0.3) == 0.0

    def test_rejects_window_longer_than_elapsed(self):
        with pytest.raises(ValueError):
            fixed_memory_bound(1.0, 1.0, 2.0, 0.5)

    @given(
        M=st.floats(0.1, 10.0),
        t=st.floats(1.0, 100.0),
        frac=st.floats(0.01, 1.0),
        alpha=st.floats(0.05, 0.95),
    )
    @settings(max_examples=150, deadline=None)
    def test_monotone_in_time_and_window(self, M, t, frac, alpha):
        T = frac * t
        b = fixed_memory_bound(M, t, T, alpha)
        assert b >= 0.0
        assert fixed_memory_bound(M, t * 1.5, T, alpha) >= b
        if T < t:
            assert fixed_memory_bound(M, t, min(T * 1.5, t), alpha) <= b + 1e-12


class TestCoefficientSums:
    def test_integer_order_identities(self):
        # at a=1 the sums collapse: A(m,1) = 1 and B(m,1) = 0
        for m in (1, 5, 50):
            assert a_func(m, 1.0) == pytest.approx(1.0, abs=1e-9)
            assert b_func(m, 1.0) == pytest.approx(0.0, abs=1e-9)

    def test_zero_order_identities(self):
        for m in (1, 5, 50):
            assert a_func(m, 0.0) == pytest.approx(0.0, abs=1e-12)
            assert b_func(m, 0.0) == pytest.approx(0.0, abs=1e-12)

    def test_positive_for_interior_orders(self):
        for alpha in (0.1, 0.5, 0.9):
            assert a_func(20, alpha) > 0.0
            assert b_func(20, alpha) > 0.0

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
    def test_b_power_law_decay(self, alpha):
        ms = [50, 100, 200, 400, 800]
        pts = [(m, b_func(m, alpha)) for m in ms]
        slope = fit_loglog_slope(pts)
        assert slope == pytest.approx(-alpha, abs=0.05)

    @pytest.mark.parametrize("alpha", [0.1, 0.5, 0.9])
    @pytest.mark.parametrize("m", [50, 100, 200, 400, 800])
    def test_b_inside_power_law_bracket(self, alpha, m):
        lo, hi = b_approx_bracket(m, alpha)
        assert lo < b_func(m, alpha) < hi

    def test_subset_ratio_approaches_geometric_factor(self):
        # consecutive coarsened-subset contributions differ by 2^(2-a)
        terms = adaptive_bound_terms(1.0, 0.01, 10, 5, 0.5)
        ratios = terms[2:] / terms[1:-1]
        assert np.allclose(ratios, 2.0 ** 1.5, rtol=1e-12)


class TestAdaptiveBound:
    def test_reduces_to_discretization_term_when_no_coarsening(self):
        a = adaptive_bound(2.0, 0.01, 10, 0, 0.5)
        pref = 2.0 / (2.0 * math.gamma(2.5))
        assert a == pytest.approx(pref * 0.01**1.5 * a_func(10, 0.5), rel=1e-14)

    def test_terms_sum_to_total(self):
        terms = adaptive_bound_terms(1.5, 0.02, 8, 4, 0.3)
        assert terms.size == 5
        assert adaptive_bound(1.5, 0.02, 8, 4, 0.3) == pytest.approx(float(terms.sum()))

    def test_rejects_negative_level_count(self):
        with pytest.raises(ValueError):
            adaptive_bound(1.0, 0.01, 10, -1, 0.5)


class TestIntervalTerms:
    def test_positive_on_seeded_random_triples(self):
        # concavity of the kernel antiderivative makes every per-interval
        # term positive (10^4 random triples)
        rng = np.random.default_rng(20240817)
        for _ in range(10_000):
            t_k = rng.uniform(0.0, 10.0)
            t_k1 = t_k + rng.uniform(1e-6, 5.0)
            t_n = t_k1 + rng.uniform(0.0, 5.0)
            alpha = rng.uniform(0.01, 0.99)
            assert interval_error_term(t_n, t_k, t_k1, alpha) > 0.0

    def test_gap_identity(self):
        # the per-interval summand is 2(2-a) times the trapezoid error
        for alpha in (0.2, 0.5, 0.8):
            gap = trapezoid_gap(3.0, 1.0, 2.0, alpha)
            term = interval_error_term(3.0, 1.0, 2.0, alpha)
            assert term == pytest.approx(2.0 * (2.0 - alpha) * gap, rel=1e-12)
            assert gap > 0.0

    def test_trapezoid_gap_rejects_degenerate_interval(self):
        with pytest.raises(ValueError):
            trapezoid_gap(2.0, 1.0, 1.0, 0.5)


class TestOpCounts:
    def test_reference_counts_at_three_levels(self):
        m, L = 10, 3
        assert op_count(PolicyKind.FULL, m, L) == 3240
        assert op_count(PolicyKind.FIXED, m, L) == 755
        assert op_count(PolicyKind.ADAPTIVE_PRESENT, m, L) == 2140

    def test_accepts_string_policy(self):
        assert op_count("full", 10, 3) == 3240

    def test_full_is_triangular_number(self):
        n = 2**4 * 7
        assert op_count(PolicyKind.FULL, 7, 4) == n * (n + 1) // 2

    def test_adaptive_cheaper_than_full_beyond_first_doubling(self):
        for L in (2, 3, 4, 6):
            assert op_count(PolicyKind.ADAPTIVE_PRESENT, 10, L) < op_count(PolicyKind.FULL, 10, L)

    def test_no_model_for_gl_policy(self):
        with pytest.raises(ValueError):
            op_count(PolicyKind.ADAPTIVE_GL, 10, 3)


class TestSlopeFit:
    def test_recovers_exact_power_law(self):
        pts = [(h, 3.0 * h**1.7) for h in (0.1, 0.05, 0.025, 0.0125)]
        assert fit_loglog_slope(pts) == pytest.approx(1.7, abs=1e-12)

    def test_needs_three_points(self):
        with pytest.raises(ValueError):
            fit_loglog_slope([(0.1, 1.0), (0.2, 2.0)])

    def test_rejects_nonpositive_errors(self):
        with pytest.raises(ValueError):
            fit_loglog_slope([(0.1, 1.0), (0.2, 0.0), (0.4, 2.0)])
