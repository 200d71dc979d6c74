import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from frametol import tolerance as tol_mod
from frametol.tolerance import (
    ConvergenceError,
    D_eval,
    D_prime,
    D_second,
    DomainError,
    FrameRatio,
    asymptotic_ratio,
    certify_convex_window,
    corollary_check,
    correction_term,
    mainprop_diagnostics,
    omega_below_root,
    omega_d,
    sandwich,
    solve_x_d,
)
from oracles import bisection_root, central_diff, mp_D, second_diff
from oracle_values import (
    COROLLARY,
    D2_EIGHTH,
    DPRIME_1_01,
    DSECOND_2_005,
    F_SECOND_ZERO_X,
    SWEEP,
    X1_RHO_HALF,
)

ONE = FrameRatio.from_rho(1.0)
RHOS = (0.1, 0.25, 0.5, 0.9, 1.0)
LATTICE_D = (1, 2, 5, 10, 100, 1000, 10000)


class TestFrameRatio:
    def test_fields(self):
        r = FrameRatio(0.5, 2.0)
        assert r.rho == 0.25
        assert r.c == 1.25

    @pytest.mark.parametrize("a, b", [(0.0, 1.0), (2.0, 1.0), (-1.0, 1.0), (math.nan, 1.0)])
    def test_rejects_invalid(self, a, b):
        with pytest.raises(DomainError):
            FrameRatio(a, b)

    def test_from_rho_range(self):
        with pytest.raises(DomainError):
            FrameRatio.from_rho(1.5)


class TestDEval:
    def test_kadec_endpoint(self):
        assert abs(D_eval(1, 0.25) - 1.0) <= 4 * math.ulp(1.0)

    def test_vanishes_at_zero(self):
        assert abs(D_eval(3, 1e-8)) < 1e-6

    def test_oracle_value(self):
        assert D_eval(2, 1 / 8) == pytest.approx(D2_EIGHTH, rel=1e-14)

    @pytest.mark.parametrize("d, x", [(0.5, 0.1), (1, 0.0), (1, 0.3), (1, -0.1)])
    def test_domain(self, d, x):
        with pytest.raises(DomainError):
            D_eval(d, x)

    @settings(max_examples=60)
    @given(
        st.floats(min_value=1.0, max_value=1e4),
        st.floats(min_value=1e-7, max_value=0.25),
    )
    def test_matches_extended_precision(self, d, x):
        ref = float(mp_D(d, x))
        assume(ref < 1e300)
        assert D_eval(d, x) == pytest.approx(ref, rel=1e-11)


class TestDPrime:
    def test_finite_difference(self):
        fd = central_diff(lambda x: D_eval(1, x), 0.1, 1e-5)
        assert D_prime(1, 0.1) == pytest.approx(fd, rel=1e-6)
        assert D_prime(1, 0.1) == pytest.approx(DPRIME_1_01, rel=1e-14)

    def test_positive_grid(self):
        assert all(D_prime(5, x) > 0 for x in np.linspace(0, 0.25, 1002)[1:-1])

    @pytest.mark.parametrize("d", [1, 3])
    def test_limit_at_origin(self, d):
        # f'(0) = 1 and g'(0) = 0, so D'_d(0+) = d * pi
        assert abs(D_prime(d, 1e-6) - d * math.pi) < 1e-4 * d


class TestDSecond:
    def test_finite_difference(self):
        fd = second_diff(lambda x: D_eval(2, x), 0.05, 1e-4)
        assert D_second(2, 0.05) == pytest.approx(fd, rel=1e-5)
        assert D_second(2, 0.05) == pytest.approx(DSECOND_2_005, rel=1e-13)

    def test_positive_in_window(self):
        w = certify_convex_window(1, 1e-4)
        assert all(D_second(1, x) > 0 for x in np.arange(1, 1000) * w.delta / 1000)

    def test_large_d_overflow_is_positive(self):
        assert D_second(1e6, 0.2) == math.inf


class TestClosedForms:
    def test_omega(self):
        assert omega_d(1, ONE) == pytest.approx(0.2206356001526516, rel=1e-15)
        assert omega_d(2, ONE) == omega_d(1, ONE) / 2
        assert omega_d(1, FrameRatio(1e-300, 1.0)) == pytest.approx(0.0, abs=1e-299)

    def test_correction(self):
        assert correction_term(1, ONE) == pytest.approx(math.log(2) ** 2 / (12 * math.pi), rel=1e-15)
        assert correction_term(10, ONE) == pytest.approx(correction_term(1, ONE) / 100, rel=1e-15)
        assert correction_term(1, FrameRatio(1e-20, 1.0)) < 1e-39


class TestSolve:
    def test_kadec_endpoint(self):
        rep = solve_x_d(1, ONE)
        assert rep.x_d == pytest.approx(0.25, abs=1e-12)
        assert rep.residual <= 1e-12

    def test_against_bisection_oracle(self):
        half = FrameRatio.from_rho(0.5)
        ref = bisection_root(lambda x: D_eval(1, x) - 0.5, 1e-16, 0.25, 1e-13)
        assert solve_x_d(1, half).x_d == pytest.approx(ref, abs=1e-13)
        assert solve_x_d(1, half).x_d == pytest.approx(X1_RHO_HALF, abs=1e-15)

    @pytest.mark.parametrize("rho", RHOS)
    @pytest.mark.parametrize("d", LATTICE_D)
    def test_residual_lattice(self, d, rho):
        rep = solve_x_d(d, FrameRatio.from_rho(rho), 1e-12)
        assert 0 < rep.x_d <= 0.25
        assert rep.residual <= 1e-12 * max(1.0, rho)
        assert abs(D_eval(d, rep.x_d) - rho) == rep.residual
        assert rep.iterations <= tol_mod.MAX_ITER

    @pytest.mark.parametrize("key", sorted(SWEEP))
    def test_against_extended_precision_sweep(self, key):
        rho, d = key
        x_ref, ratio_ref, *_ = SWEEP[key]
        rep = solve_x_d(d, FrameRatio.from_rho(rho))
        assert rep.x_d == pytest.approx(x_ref, rel=1e-13)
        assert rep.ratio == pytest.approx(ratio_ref, rel=1e-8)

    @settings(max_examples=40)
    @given(
        st.floats(min_value=1.0, max_value=1e5),
        st.floats(min_value=1e-3, max_value=0.999),
        st.floats(min_value=1e-6, max_value=1e-2),
    )
    def test_monotone_in_rho(self, d, rho, bump):
        lo = solve_x_d(d, FrameRatio.from_rho(rho)).x_d
        hi = solve_x_d(d, FrameRatio.from_rho(min(1.0, rho + bump))).x_d
        assert hi > lo

    @settings(max_examples=40)
    @given(st.floats(min_value=1.0, max_value=1e6), st.floats(min_value=1e-3, max_value=1.0))
    def test_residual_property(self, d, rho):
        rep = solve_x_d(d, FrameRatio.from_rho(rho))
        assert rep.residual <= 1e-12
        assert rep.correction > 0 and rep.omega_d > 0

    def test_tol_floor(self):
        with pytest.raises(DomainError):
            solve_x_d(1, ONE, 1e-16)

    def test_iteration_cap(self, monkeypatch):
        monkeypatch.setattr(tol_mod, "MAX_ITER", 1)
        with pytest.raises(ConvergenceError):
            solve_x_d(10, FrameRatio.from_rho(0.5))


class TestAsymptoticRatio:
    def test_d1(self):
        ref = (0.25 - math.log(2) / math.pi) / (math.log(2) ** 2 / (12 * math.pi))
        assert asymptotic_ratio(1, ONE) == pytest.approx(ref, rel=1e-12)
        assert asymptotic_ratio(1, ONE) == pytest.approx(SWEEP[(1.0, 1)][1], rel=1e-12)

    def test_large_d(self):
        assert abs(asymptotic_ratio(1e4, ONE) - 1) <= 0.01

    @pytest.mark.parametrize("rho", RHOS)
    def test_monotone_approach(self, rho):
        r = FrameRatio.from_rho(rho)
        errs = [abs(asymptotic_ratio(d, r) - 1) for d in (10, 100, 1000, 10000)]
        assert all(b < a for a, b in zip(errs, errs[1:]))

    def test_cancellation_guard(self):
        a = solve_x_d(1e4, ONE, 1e-12).ratio
        b = solve_x_d(1e4, ONE, 1e-14).ratio
        assert abs(a - b) < 1e-3


class TestMainprop:
    def test_large_d_limits(self):
        mp1, mp2, mp3 = mainprop_diagnostics(1e4, ONE)
        assert mp1 == pytest.approx(math.log(2) ** 2 / 6, rel=0.01)
        assert mp2 == pytest.approx(2 * math.pi, rel=0.01)
        assert mp3 == pytest.approx(2 * math.pi, rel=0.01)
        assert mp2 < mp3

    @pytest.mark.parametrize("key", sorted(SWEEP))
    def test_against_extended_precision_sweep(self, key):
        rho, d = key
        _, _, *ref = SWEEP[key]
        got = mainprop_diagnostics(d, FrameRatio.from_rho(rho))
        assert got.mp1 == pytest.approx(ref[0], rel=1e-9)
        assert got.mp2 == pytest.approx(ref[1], rel=1e-12)
        assert got.mp3 == pytest.approx(ref[2], rel=1e-12)
        assert got.mp2 < got.mp3


class TestConvexWindow:
    def test_d1_matches_f_second_zero(self):
        w = certify_convex_window(1, 1e-5)
        assert w.delta == pytest.approx(F_SECOND_ZERO_X, abs=1e-5)
        assert 0.15 <= w.delta <= 0.20
        # D''_1 = pi^2 (cos - sin) itself stays positive almost up to 1/4
        assert w.d_second_extent > 0.2499

    @pytest.mark.parametrize("d", [1, 2, 10, 100, 1000])
    def test_window_below_quarter(self, d):
        w = certify_convex_window(d, 1e-4)
        assert 0 < w.delta < 0.25
        assert D_second(d, w.grid_step) > 0

    def test_rejects_coarse_grid(self):
        with pytest.raises(DomainError):
            certify_convex_window(1, 1e-3)


class TestOrderingAndSandwich:
    @pytest.mark.parametrize("rho", RHOS)
    @pytest.mark.parametrize("d", LATTICE_D)
    def test_ordering_implication(self, d, rho):
        below, ordered = omega_below_root(d, FrameRatio.from_rho(rho))
        assert ordered or not below

    @pytest.mark.parametrize("rho", RHOS)
    @pytest.mark.parametrize("d", [10, 100, 1000, 10000])
    def test_sandwich(self, d, rho):
        r = FrameRatio.from_rho(rho)
        rep = solve_x_d(d, r)
        delta = certify_convex_window(d, 1e-4).delta
        assert rep.omega_d < rep.x_d < delta
        sw = sandwich(d, r)
        assert sw.lower < sw.value < sw.upper


class TestCorollary:
    def test_decreasing_to_zero(self):
        ds = [2**k for k in range(11)]
        out = corollary_check(ONE, ds)
        xs = [x for _, x in out]
        assert all(b < a for a, b in zip(xs, xs[1:]))
        assert xs[-1] < 1e-3
        for d, x in out:
            assert x == pytest.approx(COROLLARY[d], rel=1e-13)
            assert x > omega_d(d, ONE)

    def test_requires_sorted(self):
        with pytest.raises(DomainError):
            corollary_check(ONE, [4, 2])
