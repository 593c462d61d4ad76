"""Heating/cooling coefficients, net cooling rate and phonon-number theory."""

from __future__ import annotations

import math

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field

from .errors import InstabilityError, ParameterError, RegimeError
from .log import LogLevel, log
from .params import OMEGA_M, ModelParams, cooperativity
from .spectrum import m_factor, noise_spectrum

_RESCALE_MIN_COOPERATIVITY = 100.0


class CoolingReport(BaseModel):
    """Rate-equation summary at one parameter point.

    `n_ss` is `nan` in the heating region (W ≤ 0) where no steady state
    exists; `limit` is None until η is known.
    """

    model_config = ConfigDict(frozen=True)

    a_plus: float = Field(..., description="加熱係数 A₊ = s(−ω_m)")
    a_minus: float = Field(..., description="冷却係数 A₋ = s(+ω_m)")
    w: float = Field(..., description="正味の冷却率 W = 2γ_m + A₋ − A₊")
    n_ss: float = Field(..., description="定常フォノン数")
    limit: float | None = Field(None, description="冷却限界 1/(η(1+C))")
    stable: bool = Field(..., description="W > 0")


class GroundStateRequirements(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_th_max: float = Field(..., description="n_ss<1 を満たす最大 n_th (γ_m=0 で inf)")
    gamma_m_max: float = Field(..., description="n_ss<1 を満たす最大 γ_m (n_th≤1 で inf)")


def coefficients(p: ModelParams) -> tuple[float, float]:
    """(A₊, A₋) sampled from the normalized force spectrum at ∓ω_m."""
    return noise_spectrum(-OMEGA_M, p).s, noise_spectrum(OMEGA_M, p).s


def _steady_phonons(a_plus: float, a_minus: float, gamma_m: float, n_th: float) -> float:
    w = 2.0 * gamma_m + a_minus - a_plus
    if w <= 0:
        return math.nan
    return (a_plus + 2.0 * gamma_m * n_th) / w


def cooling_limit(p: ModelParams, eta: float | None = None) -> float:
    """Order of the achievable phonon number, 1/(η(1+C))."""
    eta = p.eta if eta is None else eta
    if eta is None:
        raise ParameterError("eta is required", violations=["eta must be set"])
    return 1.0 / (eta * (1.0 + cooperativity(p)))


def report(p: ModelParams) -> CoolingReport:
    a_plus, a_minus = coefficients(p)
    w = 2.0 * p.gamma_m + a_minus - a_plus
    return CoolingReport(
        a_plus=a_plus,
        a_minus=a_minus,
        w=w,
        n_ss=_steady_phonons(a_plus, a_minus, p.gamma_m, p.n_th),
        limit=None if p.eta is None else cooling_limit(p),
        stable=w > 0,
    )


def evolution(p: ModelParams, t_grid: ArrayLike) -> NDArray[np.float64]:
    """⟨n⟩(t) = (n_th − n_ss)e^{−Wt} + n_ss on `t_grid`.

    Raises:
        InstabilityError: W ≤ 0 (heating region).
    """
    r = report(p)
    if not r.stable:
        raise InstabilityError(
            f"net cooling rate W={r.w!r} is not positive", {"w": r.w}
        )
    t = np.asarray(t_grid, dtype=float)
    return (p.n_th - r.n_ss) * np.exp(-r.w * t) + r.n_ss


def ground_state_requirements(p: ModelParams) -> GroundStateRequirements:
    """Largest n_th and γ_m still giving n_ss < 1.

    Raises:
        RegimeError: A₋ ≤ 2A₊, the ground state is out of reach.
    """
    a_plus, a_minus = coefficients(p)
    margin = a_minus - 2.0 * a_plus
    if margin <= 0:
        raise RegimeError(
            "ground state unreachable: A- <= 2 A+",
            {"a_plus": a_plus, "a_minus": a_minus},
        )
    n_th_max = math.inf if p.gamma_m == 0 else margin / (2.0 * p.gamma_m) + 1.0
    gamma_m_max = math.inf if p.n_th <= 1 else margin / (2.0 * (p.n_th - 1.0))
    return GroundStateRequirements(n_th_max=n_th_max, gamma_m_max=gamma_m_max)


def rescale_kappa(p: ModelParams, kappa_new: float) -> tuple[float, float]:
    """Approximate (W', n_ss') after κ → κ' at fixed cooperativity.

    A± scale as 1/κ in the strong-coupling regime, so W' ≈ Wκ/κ' and the
    steady state is that of a resonator with γ'_m = γ_m κ'/κ.
    """
    c = cooperativity(p)
    if c < _RESCALE_MIN_COOPERATIVITY:
        log(
            LogLevel.WARN,
            "kappa rescaling assumes C >> 1",
            {"cooperativity": c, "kappa": p.kappa, "kappa_new": kappa_new},
        )
    r = report(p)
    ratio = kappa_new / p.kappa
    gamma_m_new = p.gamma_m * ratio
    n_ss_new = _steady_phonons(r.a_plus, r.a_minus, gamma_m_new, p.n_th)
    return r.w / ratio, n_ss_new


def a_plus_optimal(p: ModelParams) -> float:
    """Closed-form A₊ when Im χ₁(−ω_m) = 0.

    2λ²κ(1+C)/(κ²(1+C)² + (δ_c − ω_m)²)
    """
    one_c = 1.0 + cooperativity(p)
    return (
        2.0
        * p.lambda_**2
        * p.kappa
        * one_c
        / (p.kappa**2 * one_c**2 + (p.delta_c - OMEGA_M) ** 2)
    )


def eta_condition_holds(p: ModelParams, eta: float | None = None) -> bool:
    """Whether M(ω_m) ≥ η/(1−η) for the detunings already set in `p`."""
    eta = p.eta if eta is None else eta
    if eta is None or not 0.0 < eta < 1.0:
        raise ParameterError(
            f"eta={eta!r} outside (0, 1)", violations=["eta in open interval (0,1)"]
        )
    return m_factor(OMEGA_M, p) >= eta / (1.0 - eta)
