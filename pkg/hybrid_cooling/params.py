"""Canonical parameter record, admissibility checks and thermal-bath helpers.

Every rate and detuning is expressed in units of the mechanical frequency
ω_m, which is fixed to 1. Decay rates are the amplitude (half) rates that
enter the Langevin equations; the energy decay rates are twice these.
"""

from __future__ import annotations

import math

from pydantic import BaseModel, ConfigDict, Field, PositiveFloat

OMEGA_M = 1.0

# printed values, not CODATA: keeps n_th(2π·1 MHz, 20 mK) at the quoted 416
HBAR = 1.055e-34
K_B = 1.381e-23

_EXP_OVERFLOW = 700.0


class ModelParams(BaseModel):
    """Linearized hybrid-cavity model, all rates in units of ω_m.

    Construction does no range checking; `validate` reports every violated
    invariant at once.

    Examples:
        ```python
        p = ModelParams(kappa=5, gamma=15, **{"lambda": 0.02}, g_n=5000, omega_r=60)
        assert validate(p).ok
        ```
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    kappa: float = Field(..., description="共振器モードの振幅減衰率 κ")
    gamma: float = Field(..., description="原子集団モードの振幅減衰率 γ")
    gamma_m: float = Field(0.0, description="機械モードの振幅減衰率 γ_m")
    lambda_: float = Field(
        0.0, alias="lambda", description="共振器で増強された光機械結合 λ = λ₀ā"
    )
    g_n: float = Field(0.0, description="集団的な原子-共振器結合 g_N = g₀√N")
    omega_r: float = Field(0.0, description="原子集団の駆動強度 Ω_r")
    delta_c: float = Field(0.0, description="実効共振器離調 δ_c")
    delta_g: float = Field(0.0, description="原子離調 Δ_g")
    delta_gr: float = Field(0.0, description="二光子離調 Δ_gr")
    n_th: float = Field(0.0, description="熱浴の熱フォノン数 n_th")
    eta: float | None = Field(
        None, description="冷却係数の目標比 η（0<η<1、離調を解く前は未設定）"
    )

    def with_updates(self, **updates: float | None) -> "ModelParams":
        """Copy with fields replaced; accepts `lambda` as well as `lambda_`."""
        if "lambda" in updates:
            updates["lambda_"] = updates.pop("lambda")
        return self.model_copy(update=updates)

    def as_config(self) -> dict[str, float | None]:
        """Field values keyed exactly as in config files."""
        return self.model_dump(by_alias=True)


class ThermalInput(BaseModel):
    """SI description of the mechanical bath."""

    model_config = ConfigDict(frozen=True)

    omega_m_si: PositiveFloat = Field(..., description="機械角周波数 [rad/s]")
    temperature: PositiveFloat = Field(..., description="熱浴温度 [K]")


class ValidationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    violations: list[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


CONFIG_KEYS: tuple[str, ...] = tuple(
    (info.alias or name) for name, info in ModelParams.model_fields.items()
)


def validate(p: ModelParams) -> ValidationReport:
    violations: list[str] = []
    values = p.as_config()
    for key, value in values.items():
        if value is not None and not math.isfinite(value):
            violations.append(f"{key} must be finite")
    if p.kappa <= 0:
        violations.append("kappa must be positive")
    if p.gamma <= 0:
        violations.append("gamma must be positive")
    for key in ("gamma_m", "lambda", "g_n", "omega_r", "n_th"):
        if values[key] < 0:
            violations.append(f"{key} must be non-negative")
    if p.eta is not None and not 0.0 < p.eta < 1.0:
        violations.append("eta in open interval (0,1)")
    return ValidationReport(violations=violations)


def thermal_occupation(t: ThermalInput) -> float:
    """Bose occupation n_th = 1/(exp(ħω_m/k_BT) − 1)."""
    x = HBAR * t.omega_m_si / (K_B * t.temperature)
    if x > _EXP_OVERFLOW:
        return 0.0
    return 1.0 / math.expm1(x)


def cooperativity(p: ModelParams) -> float:
    """C = g_N²/(κγ)."""
    return p.g_n**2 / (p.kappa * p.gamma)


def mechanical_quality(p: ModelParams) -> float:
    """Q_m = ω_m/γ_m; `math.inf` for an undamped resonator."""
    return math.inf if p.gamma_m == 0 else OMEGA_M / p.gamma_m


def gamma_m_from_quality(q: float) -> float:
    return OMEGA_M / q
