"""Moment engine against the rate-equation theory at the optimal detunings.

Usage:
    pytest test/integration -m integration
"""

import numpy as np
import pytest

from hybrid_cooling import cooling, moments, presets
from hybrid_cooling.sweep import run_sweep, theory_row

pytestmark = pytest.mark.integration


def _steady_phonon(p):
    return moments.steady_state(moments.build_generator(p)).phonon


@pytest.fixture(scope="module")
def fig5a():
    return presets.resolve(presets.get_preset("fig5a"))


class TestSteadyPhononNumber:
    """Steady ⟨b†b⟩ from the full moment dynamics."""

    def test_without_mechanical_bath(self, fig5a):
        n = _steady_phonon(fig5a.with_updates(gamma_m=0.0))

        assert 1e-6 <= n <= 1e-4

    def test_with_mechanical_bath(self, fig5a):
        n = _steady_phonon(fig5a.with_updates(gamma_m=2e-7))

        assert n == pytest.approx(0.763, rel=0.05)

    def test_nearest_root_has_a_steady_state_too(self, fig5a):
        n = _steady_phonon(presets.solved(fig5a, "nearest").with_updates(gamma_m=2e-7))

        assert n == pytest.approx(0.85, rel=0.05)

    def test_heating_region_has_no_steady_state(self, log_records):
        row = theory_row(
            presets.ORACLE_PARAMS.with_updates(delta_c=1.0, gamma_m=0.0, g_n=0.0, omega_r=0.0),
            numeric=True,
        )

        assert np.isnan(row["n_ss_numeric"])


class TestTrajectory:
    """Cooling from n_th = 300 follows the exponential law."""

    def test_rate_checkpoints(self, fig5a):
        p = fig5a.with_updates(gamma_m=2e-7)
        w = cooling.report(p).w
        t_grid = np.array([0.5, 1.0, 3.0, 10.0]) / w

        engine = moments.evolve_exact(
            moments.build_generator(p), moments.thermal_initial(p), t_grid
        )
        theory = cooling.evolution(p, t_grid)

        np.testing.assert_allclose(engine.phonon, theory, rtol=0.02)

    def test_nearest_root_leaves_the_rate_law(self, fig5a):
        p = presets.solved(fig5a, "nearest").with_updates(gamma_m=2e-7)
        t_grid = np.array([0.5]) / cooling.report(p).w

        engine = moments.evolve_exact(
            moments.build_generator(p), moments.thermal_initial(p), t_grid
        )

        assert engine.phonon[0] > 1.1 * cooling.evolution(p, t_grid)[0]

    def test_rk4_agrees_with_exact(self, mild_params):
        gen = moments.build_generator(mild_params.with_updates(n_th=2.0))
        s0 = moments.thermal_initial(mild_params.with_updates(n_th=2.0))
        rk4 = moments.evolve_rk4(gen, s0, dt=0.01, t_end=20.0, stride=500)
        exact = moments.evolve_exact(gen, s0, rk4.times)

        np.testing.assert_allclose(rk4.phonon, exact.phonon, rtol=1e-6)


class TestLinewidthScaling:
    """κ → 100κ with g_N → 10 g_N keeps C and slows cooling 100 times."""

    def test_rate_drops_by_kappa_ratio(self):
        w_a = cooling.report(presets.resolve(presets.get_preset("fig5a"))).w
        w_b = cooling.report(presets.resolve(presets.get_preset("fig5b"))).w

        assert w_b == pytest.approx(w_a / 100.0, rel=0.1)

    def test_larger_drive_restores_the_rate(self):
        w_a = cooling.report(presets.resolve(presets.get_preset("fig5a"))).w
        w_c = cooling.report(presets.resolve(presets.get_preset("fig5c"))).w

        assert w_c == pytest.approx(w_a, rel=0.1)

    def test_larger_drive_restores_the_trajectory(self):
        a = presets.resolve(presets.get_preset("fig5a")).with_updates(gamma_m=2e-7)
        c = presets.resolve(presets.get_preset("fig5c")).with_updates(gamma_m=2e-7)
        t_grid = np.array([1.0, 3.0]) / cooling.report(a).w

        np.testing.assert_allclose(
            cooling.evolution(c, t_grid), cooling.evolution(a, t_grid), rtol=0.1
        )
        assert _steady_phonon(c) == pytest.approx(cooling.report(c).n_ss, rel=0.3)


class TestCouplingIndependence:
    """n_ss does not depend on Ω_r once the detunings are re-solved."""

    # with a bath the moment curve spreads by about 2e-3; theory stays within 1e-3
    @pytest.mark.parametrize(("gamma_m", "numeric_spread"), [(0.0, 1e-3), (2e-7, 3e-3)])
    def test_flat_over_omega_r(self, gamma_m, numeric_spread):
        preset = presets.get_preset("fig7")
        base = preset.params.with_updates(gamma_m=gamma_m)
        rows = run_sweep(base, preset.sweep, prepare=presets.preparer(preset), numeric=True)
        theory = [r["n_ss_theory"] for r in rows]
        numeric = [r["n_ss_numeric"] for r in rows]

        assert len(rows) == 20
        assert np.all(np.isfinite(numeric))
        assert max(theory) - min(theory) < 1e-3
        assert max(numeric) - min(numeric) < numeric_spread

    def test_nearest_root_is_not_flat(self):
        preset = presets.get_preset("fig7")
        base = preset.params.with_updates(gamma_m=2e-7)
        rows = run_sweep(base, preset.sweep, prepare=presets.solved, numeric=True)
        numeric = [r["n_ss_numeric"] for r in rows if np.isfinite(r["n_ss_numeric"])]

        assert max(numeric) - min(numeric) > 0.1


class TestGroundStateContour:
    """The n_ss = 1 line over (γ_m, n_th) from theory and from the moment engine."""

    def test_contours_agree(self):
        preset = presets.get_preset("fig4")
        p = presets.resolve(preset)
        lo, hi = preset.sweep.axis2.min, preset.sweep.axis2.max
        compared = 0
        for gamma_m in preset.sweep.axis1.values()[::5]:
            q = p.with_updates(gamma_m=float(gamma_m))
            theory = cooling.ground_state_requirements(q).n_th_max
            if not lo <= theory <= hi:
                continue
            # steady ⟨b†b⟩ is affine in n_th
            n0 = _steady_phonon(q.with_updates(n_th=0.0))
            n1 = _steady_phonon(q.with_updates(n_th=1.0))

            assert (1.0 - n0) / (n1 - n0) == pytest.approx(theory, rel=0.2)
            compared += 1

        assert compared >= 5


class TestConditionHeatmap:
    """The theoretical minimum lies where the optimal-condition lines cross."""

    def test_minimum_at_crossing(self):
        preset = presets.get_preset("fig3")
        rows = run_sweep(preset.params, preset.sweep, prepare=presets.delta_g_for_eta)
        best = min(
            (r for r in rows if np.isfinite(r["n_ss_theory"])),
            key=lambda r: r["n_ss_theory"],
        )
        loci = presets.condition_loci(preset.params)
        step_c = preset.sweep.axis1.values()[1] - preset.sweep.axis1.values()[0]
        step_gr = preset.sweep.axis2.values()[1] - preset.sweep.axis2.values()[0]

        assert abs(best["delta_c"] - loci["delta_c"][0]) <= step_c * 1.01
        assert min(abs(best["delta_gr"] - gr) for gr in loci["delta_gr"]) <= step_gr * 1.01
