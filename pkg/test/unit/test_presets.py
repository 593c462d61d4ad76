"""Unit tests for the figure presets."""

import pytest

from hybrid_cooling import detunings, presets, spectrum
from hybrid_cooling.errors import ParameterError
from hybrid_cooling.params import validate


class TestPresetParameters:
    """Pin every preset to its reference values."""

    @pytest.mark.parametrize("tag", sorted(presets.PRESETS))
    def test_common_values(self, tag):
        p = presets.get_preset(tag).params

        assert validate(p).ok
        assert p.gamma == 15.0
        assert p.kappa in (5.0, 500.0)
        assert p.lambda_ in (0.02, 0.2)

    @pytest.mark.parametrize("tag", ["fig5a", "fig5b", "fig5c"])
    def test_time_evolution_presets(self, tag):
        preset = presets.get_preset(tag)

        assert preset.params.n_th == 300.0
        assert preset.variants == {"gamma_m": (0.0, 2e-7)}
        assert preset.t_end_in_rates == 10.0

    def test_large_linewidth_presets(self):
        b = presets.get_preset("fig5b")
        c = presets.get_preset("fig5c")

        assert (b.params.kappa, b.params.g_n, b.params.lambda_) == (500.0, 5e4, 0.02)
        assert (c.params.kappa, c.params.g_n, c.params.lambda_) == (500.0, 5e4, 0.2)
        assert b.stiff
        assert not c.stiff

    def test_lineshape_presets(self):
        assert presets.get_preset("fig6a").params.omega_r == 15.0
        assert presets.get_preset("fig6b").params.omega_r == 150.0
        assert presets.get_preset("fig6a").branch_policy == "farthest"

    @pytest.mark.parametrize("tag", ["fig4", "fig5a", "fig5b", "fig5c", "fig7"])
    def test_moment_presets_take_the_farthest_root(self, tag):
        assert presets.get_preset(tag).branch_policy == "farthest"

    def test_heatmap_axes(self):
        sweep = presets.get_preset("fig4").sweep

        assert sweep is not None
        assert (sweep.axis1.name, sweep.axis1.scale) == ("gamma_m", "log")
        assert (sweep.axis2.name, sweep.axis2.count) == ("n_th", 50)

    def test_unknown(self):
        with pytest.raises(ParameterError):
            presets.get_preset("fig9")


class TestResolve:
    """Test detuning resolution for presets."""

    def test_solves_when_flagged(self):
        p = presets.resolve(presets.get_preset("fig5a"))

        assert p.delta_c == pytest.approx(411.39, abs=0.05)

    def test_skips_when_not_flagged(self):
        p = presets.resolve(presets.get_preset("fig3"))

        assert p.delta_c == 0.0

    def test_lineshape_root_is_far_detuned(self):
        p = presets.resolve(presets.get_preset("fig6b"))

        assert p.delta_g > 1e4
        assert spectrum.cooling_coefficient(p) == pytest.approx(0.98 * 2 * 0.02**2 / 5.0, rel=1e-6)


class TestPreparer:
    """Test the per-cell solver handed to sweeps."""

    def test_uses_preset_branch(self, baseline_params):
        prepared = presets.preparer(presets.get_preset("fig7"))(baseline_params)
        farthest = detunings.solve_default(baseline_params, options={"branch_policy": "farthest"})

        assert prepared.delta_g == farthest.delta_g
        assert prepared.delta_gr == pytest.approx(60.0**2 / (prepared.delta_g - 1.0) + 1.0)

    def test_default_solver_stays_on_nearest_root(self, baseline_params):
        assert presets.solved(baseline_params).delta_g == detunings.solve_default(baseline_params).delta_g


class TestConditionLoci:
    """Test the optimal-condition lines of the heatmap plane."""

    def test_loci_cross_at_a_solution(self):
        p = presets.get_preset("fig3").params
        loci = presets.condition_loci(p)
        nearest = detunings.solve_default(p)

        assert loci["delta_c"] == [pytest.approx(nearest.delta_c)]
        assert any(gr == pytest.approx(nearest.delta_gr) for gr in loci["delta_gr"])

    def test_delta_g_for_eta_meets_target(self):
        p = presets.get_preset("fig3").params.with_updates(delta_gr=-1.05)
        q = presets.delta_g_for_eta(p)

        assert spectrum.im_chi1(1.0, q) ** 2 == pytest.approx(detunings.eta_prime(p), rel=1e-9)

    def test_grid_contains_crossing(self):
        sweep = presets.get_preset("fig3").sweep
        loci = presets.condition_loci(presets.get_preset("fig3").params)

        assert sweep.axis1.min < loci["delta_c"][0] < sweep.axis1.max
        assert any(sweep.axis2.min < gr < sweep.axis2.max for gr in loci["delta_gr"])


class TestOracleParams:
    """Test the mild parameter set."""

    def test_weak_couplings(self):
        p = presets.ORACLE_PARAMS

        assert validate(p).ok
        assert max(p.lambda_, p.g_n, p.omega_r) <= 0.5
