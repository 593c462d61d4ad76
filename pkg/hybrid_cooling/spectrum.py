"""Optical-force noise spectrum of the hybrid cavity.

All spectra are returned pre-multiplied by x_ZPF², so they carry units of
a rate (ω_m) and the heating/cooling coefficients are plain samples:
A₊ = s(−ω_m), A₋ = s(+ω_m).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field

from .errors import PoleError
from .params import OMEGA_M, ModelParams

POLE_TOL = 1e-12


class Susceptibilities(BaseModel):
    """χ₁, χ₂ and χ = χ₁χ₂ + g_N² at one frequency."""

    model_config = ConfigDict(frozen=True)

    omega: float = Field(..., description="周波数 ω")
    chi1: complex = Field(..., description="原子側感受率 χ₁(ω)")
    chi2: complex = Field(..., description="共振器側感受率 χ₂(ω)")
    chi: complex = Field(..., description="合成感受率 χ(ω)")


class SpectrumSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    omega: float = Field(..., description="周波数 ω")
    s: float = Field(..., description="S_FF(ω)·x_ZPF²")
    s_upper: float = Field(..., description="上界 S_FF^Up(ω)·x_ZPF²")
    m_factor: float = Field(..., description="M(ω)、g_N=0 では inf")


class CoefficientLimits(BaseModel):
    """Supremum/infimum values the heating and cooling bounds approach."""

    model_config = ConfigDict(frozen=True)

    a_sup: float = Field(..., description="A₊^Sup = A₋^Sup = 2λ²/κ")
    a_plus_inf: float = Field(0.0, description="A₊^Inf (C→∞)")
    a_minus_inf: float = Field(0.0, description="A₋^Inf (M(ω_m)→0)")


def _check_chi1_pole(omega: float, p: ModelParams) -> None:
    # without the R coupling the Ω_r²/(ω + Δ_gr) term is absent, and so is the pole
    if p.omega_r != 0 and abs(omega + p.delta_gr) < POLE_TOL:
        raise PoleError(
            f"chi1 is singular at omega={omega!r} (omega + delta_gr = 0)",
            {"omega": omega, "delta_gr": p.delta_gr},
        )


def im_chi1(omega: float, p: ModelParams) -> float:
    """Im χ₁(ω) = (ω + Δ_g) − Ω_r²/(ω + Δ_gr)."""
    _check_chi1_pole(omega, p)
    if p.omega_r == 0:
        return omega + p.delta_g
    return (omega + p.delta_g) - p.omega_r**2 / (omega + p.delta_gr)


def susceptibilities(omega: float, p: ModelParams) -> Susceptibilities:
    chi1 = complex(-p.gamma, im_chi1(omega, p))
    chi2 = complex(-p.kappa, omega + p.delta_c)
    return Susceptibilities(
        omega=omega, chi1=chi1, chi2=chi2, chi=chi1 * chi2 + p.g_n**2
    )


def _m_from_abs2(chi1_abs2: float, p: ModelParams) -> float:
    if p.g_n == 0:
        return math.inf
    return p.kappa * chi1_abs2 / (p.gamma * p.g_n**2)


def _upper_from_m(m: float, p: ModelParams) -> float:
    a_sup = 2.0 * p.lambda_**2 / p.kappa
    if math.isinf(m):
        return a_sup
    return a_sup * m / (m + 1.0)


def m_factor(omega: float, p: ModelParams) -> float:
    """M(ω) = κ|χ₁(ω)|²/(γg_N²); `math.inf` when g_N = 0."""
    chi1 = susceptibilities(omega, p).chi1
    return _m_from_abs2(abs(chi1) ** 2, p)


def noise_spectrum(omega: float, p: ModelParams) -> SpectrumSample:
    """Normalized force spectrum λ²(2κ|χ₁|² + 2γg_N²)/|χ|² and its upper bound.

    Raises:
        PoleError: ω sits on the χ₁ pole ω = −Δ_gr.
    """
    sus = susceptibilities(omega, p)
    chi1_abs2 = abs(sus.chi1) ** 2
    s = (
        p.lambda_**2
        * (2.0 * p.kappa * chi1_abs2 + 2.0 * p.gamma * p.g_n**2)
        / abs(sus.chi) ** 2
    )
    m = _m_from_abs2(chi1_abs2, p)
    return SpectrumSample(omega=omega, s=s, s_upper=_upper_from_m(m, p), m_factor=m)


def saturation_residual(omega: float, p: ModelParams) -> float:
    """ω + δ_c − g_N² Im χ₁/|χ₁|²; zero exactly where s reaches s_upper."""
    chi1 = susceptibilities(omega, p).chi1
    return omega + p.delta_c - p.g_n**2 * chi1.imag / abs(chi1) ** 2


def extremum_residuals(omega: float, p: ModelParams) -> tuple[float, float]:
    """Residuals of the γ = 0 maximum and minimum conditions at ω.

    Returns:
        (max_residual, min_residual). The minimum residual is the nested
        detuning (ω + Δ_g) − Ω_r²/(ω + Δ_gr); where it vanishes with
        g_N ≠ 0 the maximum condition diverges and `math.inf` is returned
        in its place.
    """
    nested = im_chi1(omega, p)
    if p.g_n == 0:
        return omega + p.delta_c, nested
    if abs(nested) < POLE_TOL:
        return math.inf, nested
    return omega + p.delta_c - p.g_n**2 / nested, nested


def spectrum_gamma0(omega: float, p: ModelParams) -> float:
    """γ = 0 approximation 2λ²κ/{[ω + δ_c − g_N²/(nested)]² + κ²}.

    Raises:
        PoleError: at the χ₁ pole, or where the nested denominator vanishes
            while g_N ≠ 0.
    """
    nested = im_chi1(omega, p)
    if p.g_n == 0:
        shift = omega + p.delta_c
    else:
        if abs(nested) < POLE_TOL:
            raise PoleError(
                f"nested detuning vanishes at omega={omega!r}",
                {"omega": omega, "nested": nested},
            )
        shift = omega + p.delta_c - p.g_n**2 / nested
    return 2.0 * p.lambda_**2 * p.kappa / (shift**2 + p.kappa**2)


def upper_bound_of_im(im_chi1_value: float, p: ModelParams) -> float:
    """S^Up·x_ZPF² at a frequency where Im χ₁ takes the given value.

    Uses M = κ(Im² + γ²)/(γg_N²) and the (1 + 1/M)⁻¹ form of the bound;
    the value at Im χ₁ = 0 is (2λ²/κ)/(1 + C).
    """
    a_sup = 2.0 * p.lambda_**2 / p.kappa
    inv_m = p.gamma * p.g_n**2 / (p.kappa * (im_chi1_value**2 + p.gamma**2))
    return a_sup / (1.0 + inv_m)


def a_plus_upper_of_im(im_chi1: float, p: ModelParams) -> float:
    """A₊^Up as a function of Im χ₁(−ω_m)."""
    return upper_bound_of_im(im_chi1, p)


def a_minus_upper_of_im(im_chi1: float, p: ModelParams) -> float:
    """A₋^Up as a function of Im χ₁(+ω_m)."""
    return upper_bound_of_im(im_chi1, p)


def coefficient_limits(p: ModelParams) -> CoefficientLimits:
    return CoefficientLimits(a_sup=2.0 * p.lambda_**2 / p.kappa)


def heating_coefficient(p: ModelParams) -> float:
    return noise_spectrum(-OMEGA_M, p).s


def cooling_coefficient(p: ModelParams) -> float:
    return noise_spectrum(OMEGA_M, p).s


# ---------- vectorized curves ----------
def spectrum_curves(
    omegas: ArrayLike, p: ModelParams
) -> dict[str, NDArray[np.float64]]:
    """s, s_gamma0 and s_upper over a frequency grid.

    Pole points are reported as `nan` instead of raising, so a whole grid
    can be rendered.
    """
    w = np.asarray(omegas, dtype=float)
    lam2 = p.lambda_**2
    g2 = p.g_n**2
    with np.errstate(divide="ignore", invalid="ignore"):
        chi1_pole = (np.abs(w + p.delta_gr) < POLE_TOL) & (p.omega_r != 0)
        pole = chi1_pole
        nested = w + p.delta_g
        if p.omega_r != 0:
            nested = nested - p.omega_r**2 / (w + p.delta_gr)
        chi1 = -p.gamma + 1j * nested
        chi2 = -p.kappa + 1j * (w + p.delta_c)
        chi1_abs2 = np.abs(chi1) ** 2
        s = lam2 * (2 * p.kappa * chi1_abs2 + 2 * p.gamma * g2) / np.abs(chi1 * chi2 + g2) ** 2
        if g2 == 0:
            s_upper = np.full_like(w, 2 * lam2 / p.kappa)
            shift = w + p.delta_c
        else:
            m = p.kappa * chi1_abs2 / (p.gamma * g2)
            s_upper = 2 * lam2 / p.kappa * m / (m + 1)
            shift = w + p.delta_c - g2 / nested
            pole = pole | (np.abs(nested) < POLE_TOL)
        s_gamma0 = 2 * lam2 * p.kappa / (shift**2 + p.kappa**2)
    s = np.where(chi1_pole, np.nan, s)
    s_upper = np.where(chi1_pole, np.nan, s_upper)
    s_gamma0 = np.where(pole, np.nan, s_gamma0)
    return {"omega": w, "s": s, "s_gamma0": s_gamma0, "s_upper": s_upper}
