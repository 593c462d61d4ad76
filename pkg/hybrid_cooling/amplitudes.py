"""Classical steady-state amplitudes and atom-number feasibility checks.

The effective detuning δ_c = δ'_c − λ₀(b̄ + b̄*) enters the denominator D
that determines ā, so the amplitudes are found self-consistently by damped
fixed-point iteration on δ_c.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field

from .errors import ConvergenceError, SingularDError
from .log import LogLevel, log
from .params import OMEGA_M

D_TOL = 1e-12
DAMPING = 0.5
TOLERANCE = 1e-12
MAX_ITERATIONS = 1000

EXCITATION_THRESHOLD = 0.1
ATOM_MARGIN = 10.0


class DriveParams(BaseModel):
    """Drive and single-atom parameters in units of ω_m."""

    model_config = ConfigDict(frozen=True)

    omega_p: float = Field(..., ge=0, description="共振器駆動強度 Ω_p")
    lambda0: float = Field(..., ge=0, description="単一光子光機械結合 λ₀")
    g0: float = Field(..., gt=0, description="単一原子結合 g₀")
    n_atoms: float = Field(..., ge=1, description="原子数 N")
    delta_c_prime: float = Field(0.0, description="裸の共振器離調 δ'_c")
    kappa: float = Field(..., gt=0, description="κ")
    gamma: float = Field(..., gt=0, description="γ")
    delta_g: float = Field(0.0, description="Δ_g")
    delta_gr: float = Field(0.0, description="Δ_gr")
    omega_r: float = Field(0.0, ge=0, description="Ω_r")

    @property
    def g_n(self) -> float:
        return self.g0 * math.sqrt(self.n_atoms)


class SteadyAmplitudes(BaseModel):
    model_config = ConfigDict(frozen=True)

    a_bar: complex
    b_bar: complex
    e_bar: complex
    r_bar: complex
    lambda_eff: complex = Field(..., description="λ = λ₀ā")
    delta_c_eff: float = Field(..., description="実効離調 δ_c")
    d_denominator: complex = Field(..., description="D")
    iterations: int = Field(0, description="固定点反復の回数")


class FeasibilityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    excitation_ratio: float = Field(..., description="(|Ē|²+|R̄|²)/N")
    ratio_a_e: float = Field(..., description="|ā|/|Ē|")
    ratio_a_e_approx: float = Field(..., description="Ω_r²/(2g_Nω_m)")
    ratio_a_r: float = Field(..., description="|ā|/|R̄|")
    ratio_a_r_approx: float = Field(..., description="Ω_r/(2g_N)")
    n_bound_48: float = Field(..., description="|ā|²(4g_N²/Ω_r²)(1+ω_m²/Ω_r²)")
    n_bound_49: float = Field(..., description="(κγ/g₀)²")
    excitation_ok: bool
    n_bound_48_ok: bool
    n_bound_49_ok: bool

    @property
    def feasible(self) -> bool:
        return self.excitation_ok and self.n_bound_48_ok and self.n_bound_49_ok


def _denominator(d: DriveParams, delta_c: float) -> complex:
    dk = complex(delta_c, d.kappa)
    value = d.omega_r**2 * dk + d.delta_gr * (
        d.g_n**2 - dk * complex(d.delta_g, d.gamma)
    )
    if abs(value) < D_TOL:
        raise SingularDError(
            "steady-state denominator D vanished",
            {"delta_c": delta_c, "abs_d": abs(value)},
        )
    return value


def _amplitudes_at(d: DriveParams, delta_c: float) -> SteadyAmplitudes:
    den = _denominator(d, delta_c)
    a_bar = d.omega_p * (d.omega_r**2 - d.delta_gr * complex(d.delta_g, d.gamma)) / den
    return SteadyAmplitudes(
        a_bar=a_bar,
        b_bar=-d.lambda0 * abs(a_bar) ** 2 / OMEGA_M,
        e_bar=-d.g_n * d.omega_p * d.delta_gr / den,
        r_bar=-d.g_n * d.omega_p * d.omega_r / den,
        lambda_eff=d.lambda0 * a_bar,
        delta_c_eff=delta_c,
        d_denominator=den,
    )


def effective_detuning(d: DriveParams, amps: SteadyAmplitudes) -> float:
    """δ'_c − λ₀(b̄ + b̄*) for the given amplitudes."""
    return d.delta_c_prime - d.lambda0 * 2.0 * amps.b_bar.real


def steady_amplitudes(
    d: DriveParams,
    *,
    damping: float = DAMPING,
    tol: float = TOLERANCE,
    max_iterations: int = MAX_ITERATIONS,
) -> SteadyAmplitudes:
    """Self-consistent steady state of the driven classical amplitudes.

    Raises:
        ConvergenceError: no fixed point within `max_iterations` (bistable
            drive).
        SingularDError: |D| < 1e-12 along the iteration.
    """
    delta_c = d.delta_c_prime
    amps = _amplitudes_at(d, delta_c)
    if d.lambda0 == 0 or d.omega_p == 0:
        return amps

    for iteration in range(1, max_iterations + 1):
        target = effective_detuning(d, amps)
        step = target - delta_c
        if abs(step) <= tol * max(1.0, abs(delta_c)):
            log(LogLevel.DEBUG, "amplitudes converged", {"iterations": iteration})
            return amps.model_copy(update={"iterations": iteration})
        delta_c = delta_c + damping * step
        amps = _amplitudes_at(d, delta_c)

    raise ConvergenceError(
        "self-consistent detuning did not converge",
        {"iterations": max_iterations, "delta_c": delta_c},
    )


def classical_residuals(d: DriveParams, amps: SteadyAmplitudes) -> list[complex]:
    """Zero-derivative conditions of the driven classical equations.

    The cavity equation keeps the nonlinear λ₀ā(b̄ + b̄*) term with the bare
    detuning δ'_c; the mechanical one omits γ_m.
    """
    a, b, e, r = amps.a_bar, amps.b_bar, amps.e_bar, amps.r_bar
    return [
        complex(-d.kappa, d.delta_c_prime) * a
        - 1j * d.lambda0 * a * (b + b.conjugate())
        - 1j * d.g_n * e
        - 1j * d.omega_p,
        -1j * OMEGA_M * b - 1j * d.lambda0 * abs(a) ** 2,
        complex(-d.gamma, d.delta_g) * e - 1j * (d.g_n * a + d.omega_r * r),
        1j * d.delta_gr * r - 1j * d.omega_r * e,
    ]


def _ratio(num: float, den: float) -> float:
    if den == 0:
        return math.inf if num > 0 else 0.0
    return num / den


def feasibility(
    d: DriveParams,
    amps: SteadyAmplitudes | None = None,
    *,
    excitation_threshold: float = EXCITATION_THRESHOLD,
    atom_margin: float = ATOM_MARGIN,
) -> FeasibilityReport:
    """Weak-excitation and atom-number checks for a driven configuration."""
    amps = amps if amps is not None else steady_amplitudes(d)
    a_abs, e_abs, r_abs = abs(amps.a_bar), abs(amps.e_bar), abs(amps.r_bar)
    excitation = (e_abs**2 + r_abs**2) / d.n_atoms
    if d.omega_r > 0:
        n48 = a_abs**2 * 4.0 * d.g_n**2 / d.omega_r**2 * (1.0 + OMEGA_M**2 / d.omega_r**2)
    else:
        n48 = math.inf if a_abs > 0 else 0.0
    n49 = (d.kappa * d.gamma / d.g0) ** 2
    return FeasibilityReport(
        excitation_ratio=excitation,
        ratio_a_e=_ratio(a_abs, e_abs),
        ratio_a_e_approx=d.omega_r**2 / (2.0 * d.g_n * OMEGA_M),
        ratio_a_r=_ratio(a_abs, r_abs),
        ratio_a_r_approx=d.omega_r / (2.0 * d.g_n),
        n_bound_48=n48,
        n_bound_49=n49,
        excitation_ok=excitation < excitation_threshold,
        n_bound_48_ok=d.n_atoms > atom_margin * n48,
        n_bound_49_ok=d.n_atoms > atom_margin * n49,
    )
