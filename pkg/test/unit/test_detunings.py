"""Unit tests for the optimal-detuning solver."""

import math

import numpy as np
import pytest

from hybrid_cooling import detunings, spectrum
from hybrid_cooling.errors import ParameterError, RegimeError
from hybrid_cooling.params import ModelParams


class TestEtaPrime:
    """Test η' and its regime guard."""

    def test_baseline_value(self, baseline_params):
        assert detunings.eta_prime(baseline_params) == pytest.approx(75e6 * 49 - 225)

    def test_small_eta_has_no_branch(self, baseline_params):
        with pytest.raises(RegimeError):
            detunings.eta_prime(baseline_params, eta=1e-9)

    def test_zero_gamma_is_degenerate(self, baseline_params):
        with pytest.raises(RegimeError):
            detunings.eta_prime(baseline_params.with_updates(gamma=0.0))

    def test_eta_required(self, baseline_params):
        with pytest.raises(ParameterError):
            detunings.eta_prime(baseline_params.with_updates(eta=None))

    def test_eta_out_of_range(self, baseline_params):
        with pytest.raises(ParameterError):
            detunings.eta_prime(baseline_params, eta=1.0)


class TestSolve:
    """Test enumeration, ordering and certificates of every root."""

    def test_cavity_detuning_at_98_percent(self, baseline_params):
        positive = [s for s in detunings.solve(baseline_params) if s.sign > 0]

        assert positive
        for sol in positive:
            assert sol.delta_c == pytest.approx(411.39, abs=0.05)

    def test_cavity_detuning_at_99_percent(self, baseline_params):
        sol = detunings.solve_default(baseline_params, eta=0.99)

        assert sol.delta_c == pytest.approx(289.13, abs=0.05)

    def test_negative_branch_mirrors_cavity_detuning(self, baseline_params):
        solutions = detunings.solve(baseline_params)
        negative = [s for s in solutions if s.sign < 0]

        assert negative
        for sol in negative:
            assert sol.delta_c == pytest.approx(-411.39 - 2.0, abs=0.05)

    def test_four_roots_sorted_by_distance(self, baseline_params):
        solutions = detunings.solve(baseline_params)
        distances = [abs(s.delta_g - 1.0) for s in solutions]

        assert len(solutions) == 4
        assert distances == sorted(distances)
        assert solutions[0].sign == 1

    def test_every_root_carries_certificates(self, baseline_params):
        for sol in detunings.solve(baseline_params):
            r = sol.residuals
            assert abs(r.r24) < 1e-8 * (1.0 + abs(sol.delta_g))
            assert abs(r.r28) < 1e-9 * (1.0 + abs(sol.delta_c))
            assert abs(r.r_m) < 1e-8

    def test_heating_minimum_holds(self, solved_params):
        assert abs(spectrum.im_chi1(-1.0, solved_params)) < 1e-9
        chi1 = spectrum.susceptibilities(-1.0, solved_params).chi1
        assert abs(chi1) ** 2 == pytest.approx(15.0**2, rel=1e-8)

    def test_roots_satisfy_target_ratio(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = ModelParams(
                kappa=rng.uniform(1.0, 20.0),
                gamma=rng.uniform(1.0, 20.0),
                g_n=rng.uniform(500.0, 1e4),
                omega_r=rng.uniform(5.0, 300.0),
                eta=rng.uniform(0.5, 0.99),
            )
            try:
                solutions = detunings.solve(p)
            except RegimeError:
                continue
            target = p.eta / (1.0 - p.eta)
            for sol in solutions:
                m = spectrum.m_factor(1.0, sol.apply(p))
                assert m == pytest.approx(target, rel=1e-8)

    def test_no_real_root(self):
        p = ModelParams(kappa=1.0, gamma=1.0, g_n=1.0, omega_r=1.0, eta=0.5)

        with pytest.raises(RegimeError):
            detunings.solve(p)

    def test_decoupled_r_mode_keeps_the_nonzero_root(self, baseline_params):
        p = baseline_params.with_updates(omega_r=0.0)
        s = math.sqrt(detunings.eta_prime(p))
        solutions = detunings.solve(p)

        assert [sol.sign for sol in solutions] == [1, -1]
        for sol in solutions:
            u = sol.delta_g - 1.0
            assert u == pytest.approx(sol.sign * s - 2.0, rel=1e-12)
            assert sol.delta_gr == 1.0
            assert sol.residuals.r24 == pytest.approx(u, rel=1e-12)
            assert abs(sol.residuals.r_m) < 1e-9


class TestSolveDefault:
    """Test the deterministic branch choice."""

    def test_deterministic(self, baseline_params):
        assert detunings.solve_default(baseline_params) == detunings.solve_default(baseline_params)

    def test_nearest_root_values(self, baseline_params):
        sol = detunings.solve_default(baseline_params)

        assert sol.branch == "+1"
        assert sol.delta_gr == pytest.approx(-1.0577, abs=1e-3)
        assert sol.delta_g - 1.0 == pytest.approx(-1749.5, abs=1.0)

    def test_cavity_detuning_independent_of_drive(self, baseline_params):
        values = [
            detunings.solve_default(baseline_params.with_updates(omega_r=om)).delta_c
            for om in (10.0, 60.0, 600.0, 1e4)
        ]

        assert max(values) - min(values) < 1e-9

    def test_lambda_does_not_enter(self, baseline_params):
        a = detunings.solve_default(baseline_params)
        b = detunings.solve_default(baseline_params.with_updates(**{"lambda": 0.0}))

        assert a == b

    def test_farthest_policy_picks_largest_positive_root(self, baseline_params):
        sol = detunings.solve_default(baseline_params, options={"branch_policy": "farthest"})

        assert sol.sign == 1
        assert sol.delta_g > 1.0
        assert sol.delta_c == pytest.approx(411.39, abs=0.05)

    def test_unknown_policy(self, baseline_params):
        with pytest.raises(ParameterError):
            detunings.solve_default(baseline_params, options={"branch_policy": "middle"})  # type: ignore[typeddict-item]

    def test_apply_sets_detunings_and_eta(self, baseline_params):
        sol = detunings.solve_default(baseline_params, eta=0.9)
        p = sol.apply(baseline_params)

        assert (p.delta_g, p.delta_gr, p.delta_c, p.eta) == (
            sol.delta_g,
            sol.delta_gr,
            sol.delta_c,
            0.9,
        )

    def test_approach_to_mechanical_frequency_as_eta_grows(self, baseline_params):
        sols = [detunings.solve_default(baseline_params, eta=e) for e in (0.9, 0.99, 0.999)]
        gr = [abs(s.delta_gr + 1.0) for s in sols]
        dc = [abs(s.delta_c + 1.0) for s in sols]

        assert gr == sorted(gr, reverse=True)
        assert dc == sorted(dc, reverse=True)


class TestVerify:
    """Test residuals computed from scratch."""

    def test_perturbed_two_photon_detuning(self, solved_params):
        p = solved_params.with_updates(delta_gr=solved_params.delta_gr + 0.1)
        expected = 60.0**2 * 0.1 / (solved_params.delta_gr - 1.0) ** 2

        assert detunings.verify(p).r24 == pytest.approx(expected, rel=0.1)

    def test_cavity_shift_moves_r28_by_one(self, solved_params):
        base = detunings.verify(solved_params).r28
        shifted = detunings.verify(solved_params.with_updates(delta_c=solved_params.delta_c + 1.0)).r28

        assert shifted - base == pytest.approx(1.0, abs=1e-9)

    def test_r_m_nan_without_eta(self, solved_params):
        assert math.isnan(detunings.verify(solved_params.with_updates(eta=None)).r_m)

    def test_critical_cavity_detuning(self, solved_params):
        assert detunings.delta_c_critical(solved_params) == pytest.approx(
            solved_params.delta_c, abs=1e-9
        )
