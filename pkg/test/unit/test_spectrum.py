"""Unit tests for the force-noise spectrum and its bounds."""

import math

import numpy as np
import pytest

from hybrid_cooling import spectrum
from hybrid_cooling.errors import PoleError
from hybrid_cooling.params import ModelParams


def _random_params(rng: np.random.Generator) -> ModelParams:
    return ModelParams.model_validate(
        {
            "kappa": rng.uniform(0.1, 50.0),
            "gamma": rng.uniform(0.1, 50.0),
            "lambda": rng.uniform(0.001, 0.1),
            "g_n": rng.uniform(0.0, 1e4),
            "omega_r": rng.uniform(0.0, 200.0),
            "delta_c": rng.uniform(-500.0, 500.0),
            "delta_g": rng.uniform(-2000.0, 2000.0),
            "delta_gr": rng.uniform(-5.0, 5.0),
        }
    )


class TestSusceptibilities:
    """Test χ₁, χ₂ and the pole guard."""

    def test_values(self):
        p = ModelParams(kappa=2.0, gamma=3.0, g_n=4.0, omega_r=2.0, delta_c=1.0, delta_g=5.0, delta_gr=3.0)
        sus = spectrum.susceptibilities(1.0, p)

        assert sus.chi1 == pytest.approx(complex(-3.0, 6.0 - 4.0 / 4.0))
        assert sus.chi2 == pytest.approx(complex(-2.0, 2.0))
        assert sus.chi == pytest.approx(sus.chi1 * sus.chi2 + 16.0)

    def test_pole(self):
        p = ModelParams(kappa=1.0, gamma=1.0, omega_r=1.0, delta_gr=-1.0)

        with pytest.raises(PoleError):
            spectrum.im_chi1(1.0, p)
        with pytest.raises(PoleError):
            spectrum.noise_spectrum(1.0, p)

    def test_no_pole_without_r_coupling(self):
        p = ModelParams(kappa=1.0, gamma=1.0, delta_g=0.5, delta_gr=-1.0)

        assert spectrum.im_chi1(1.0, p) == 1.5
        curves = spectrum.spectrum_curves([0.5, 1.0], p)
        assert np.all(np.isfinite(curves["s"]))


class TestNoiseSpectrum:
    """Test the spectrum against its upper bound and limiting forms."""

    def test_never_exceeds_upper_bound(self):
        rng = np.random.default_rng(7)
        for _ in range(10_000):
            p = _random_params(rng)
            omega = rng.uniform(-3.0, 3.0)
            if abs(omega + p.delta_gr) < 1e-6:
                continue
            sample = spectrum.noise_spectrum(omega, p)

            assert sample.s <= sample.s_upper * (1.0 + 1e-12)

    def test_bound_reached_where_saturation_residual_vanishes(self, solved_params):
        sample = spectrum.noise_spectrum(1.0, solved_params)

        assert abs(spectrum.saturation_residual(1.0, solved_params)) < 1e-6 * solved_params.kappa
        assert sample.s == pytest.approx(sample.s_upper, rel=1e-6)

    def test_bare_cavity_is_lorentzian(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            p = _random_params(rng).with_updates(g_n=0.0)
            omega = rng.uniform(-3.0, 3.0)
            if abs(omega + p.delta_gr) < 1e-6:
                continue
            expected = 2 * p.lambda_**2 * p.kappa / (p.kappa**2 + (omega + p.delta_c) ** 2)

            assert spectrum.noise_spectrum(omega, p).s == pytest.approx(expected, rel=1e-12)

    def test_m_factor_infinite_without_atoms(self):
        p = ModelParams(kappa=1.0, gamma=1.0, **{"lambda": 0.1})

        assert spectrum.m_factor(1.0, p) == math.inf
        assert spectrum.noise_spectrum(1.0, p).s_upper == pytest.approx(0.02)

    def test_solved_cooling_coefficient(self, solved_params):
        a_sup = 2 * 0.02**2 / 5.0

        assert spectrum.cooling_coefficient(solved_params) == pytest.approx(0.98 * a_sup, rel=1e-6)
        assert spectrum.coefficient_limits(solved_params).a_sup == pytest.approx(a_sup)


class TestBoundsOfIm:
    """Test the upper bound expressed through Im χ₁."""

    def test_minimum_at_zero_is_sup_over_one_plus_c(self, baseline_params):
        c = 5000.0**2 / 75.0
        a_sup = 2 * 0.02**2 / 5.0

        assert spectrum.a_plus_upper_of_im(0.0, baseline_params) == pytest.approx(a_sup / (1 + c))

    def test_matches_sample_bound(self, solved_params):
        x = spectrum.im_chi1(1.0, solved_params)

        assert spectrum.a_minus_upper_of_im(x, solved_params) == pytest.approx(
            spectrum.noise_spectrum(1.0, solved_params).s_upper, rel=1e-12
        )

    def test_monotone_in_magnitude(self, baseline_params):
        values = [spectrum.a_plus_upper_of_im(x, baseline_params) for x in (0.0, 1e2, 1e3, 1e4)]

        assert values == sorted(values)


class TestGammaZeroApproximation:
    """Test the γ = 0 lineshape and extremum residuals."""

    def test_extremum_residuals_without_atoms(self):
        p = ModelParams(kappa=1.0, gamma=1.0, delta_c=-1.0, delta_g=2.0)

        assert spectrum.extremum_residuals(1.0, p) == (0.0, 3.0)

    def test_max_residual_diverges_on_nested_zero(self):
        p = ModelParams(kappa=1.0, gamma=1.0, g_n=1.0, delta_g=-1.0)

        max_res, min_res = spectrum.extremum_residuals(1.0, p)

        assert max_res == math.inf
        assert min_res == 0.0
        with pytest.raises(PoleError):
            spectrum.spectrum_gamma0(1.0, p)

    def test_approaches_exact_spectrum_for_small_gamma(self, baseline_params):
        p = baseline_params.with_updates(gamma=1e-6, delta_c=10.0, delta_g=300.0, delta_gr=3.0)

        assert spectrum.spectrum_gamma0(1.0, p) == pytest.approx(
            spectrum.noise_spectrum(1.0, p).s, rel=1e-4
        )


class TestSpectrumCurves:
    """Test the vectorized grid evaluation."""

    def test_matches_pointwise(self, solved_params):
        omegas = np.linspace(-2.0, 2.0, 41)
        curves = spectrum.spectrum_curves(omegas, solved_params)

        for k, w in enumerate(omegas):
            sample = spectrum.noise_spectrum(float(w), solved_params)
            assert curves["s"][k] == pytest.approx(sample.s, rel=1e-9)
            assert curves["s_upper"][k] == pytest.approx(sample.s_upper, rel=1e-9)

    def test_pole_points_are_nan(self):
        p = ModelParams(kappa=1.0, gamma=1.0, g_n=1.0, omega_r=1.0, delta_gr=0.0)
        curves = spectrum.spectrum_curves([-1.0, 0.0, 1.0], p)

        assert math.isnan(curves["s"][1])
        assert math.isnan(curves["s_gamma0"][1])
        assert not math.isnan(curves["s"][0])
