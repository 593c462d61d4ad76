"""Named parameter sets for the standard curves, heatmaps and trajectories.

Detunings are solved at use time unless the preset sweeps them directly.
Presets driving the moment engine take the farthest positive root; on the
nearest root the R mode sits at the heating sideband and the moment dynamics
leave the rate-equation regime.
"""

from __future__ import annotations

import math
from functools import partial
from typing import Any, Callable, Literal

from pydantic import BaseModel, ConfigDict, Field

from . import detunings
from .detunings import BranchPolicy
from .errors import ParameterError
from .params import OMEGA_M, ModelParams
from .sweep import AxisSpec, SweepSpec

PresetTag = Literal[
    "fig2a", "fig2b", "fig3", "fig4", "fig5a", "fig5b", "fig5c", "fig6a", "fig6b", "fig7"
]  # fmt: skip


class FigurePreset(BaseModel):
    model_config = ConfigDict(frozen=True)

    tag: PresetTag
    description: str
    params: ModelParams
    solve_detunings: bool = Field(True, description="η から離調を解くかどうか")
    branch_policy: BranchPolicy = "nearest"
    variants: dict[str, tuple[float, ...]] = Field(
        default_factory=dict, description="曲線ごとに変えるパラメータ"
    )
    sweep: SweepSpec | None = None
    x_range: tuple[float, float, int] | None = Field(
        None, description="曲線の横軸範囲 (min, max, 点数)"
    )
    t_end_in_rates: float | None = Field(None, description="時間発展の終端 (1/W 単位)")
    stiff: bool = Field(False, description="RK4 には --force が必要")


def _base(**extra: float) -> ModelParams:
    values: dict[str, Any] = {"kappa": 5.0, "gamma": 15.0, "lambda": 0.02}
    values.update(extra)
    return ModelParams.model_validate(values)


_OPTIMAL = {"g_n": 5000.0, "omega_r": 60.0, "eta": 0.98}

PRESETS: dict[str, FigurePreset] = {
    "fig2a": FigurePreset(
        tag="fig2a",
        description="heating-bound A+^Up versus Im chi1(-omega_m) for three g_N",
        params=_base(g_n=5000.0),
        solve_detunings=False,
        variants={"g_n": (50.0, 500.0, 5000.0)},
        x_range=(-2e4, 2e4, 401),
    ),
    "fig2b": FigurePreset(
        tag="fig2b",
        description="cooling coefficient A- versus delta_c - delta_c^cri for three eta",
        params=_base(**_OPTIMAL),
        variants={"eta": (0.98, 0.5, 0.25)},
        x_range=(-100.0, 100.0, 401),
    ),
    "fig3": FigurePreset(
        tag="fig3",
        description="theoretical n_ss over (delta_c, delta_gr) with delta_g fixed by eta",
        params=_base(**_OPTIMAL, gamma_m=0.0),
        solve_detunings=False,
        sweep=SweepSpec(
            axis1=AxisSpec(name="delta_c", min=311.39, max=511.39, count=51),
            axis2=AxisSpec(name="delta_gr", min=-1.108, max=-1.008, count=51),
            preset="fig3",
        ),
    ),
    "fig4": FigurePreset(
        tag="fig4",
        description="n_ss over (gamma_m, n_th) at the optimal detunings",
        params=_base(**_OPTIMAL),
        branch_policy="farthest",
        sweep=SweepSpec(
            axis1=AxisSpec(name="gamma_m", min=1e-9, max=1e-5, count=50, scale="log"),
            axis2=AxisSpec(name="n_th", min=1.0, max=1e4, count=50, scale="log"),
            preset="fig4",
        ),
    ),
    "fig5a": FigurePreset(
        tag="fig5a",
        description="phonon-number evolution, kappa=5",
        params=_base(**_OPTIMAL, n_th=300.0),
        branch_policy="farthest",
        variants={"gamma_m": (0.0, 2e-7)},
        t_end_in_rates=10.0,
    ),
    "fig5b": FigurePreset(
        tag="fig5b",
        description="phonon-number evolution, kappa=500 with C held",
        params=_base(**{**_OPTIMAL, "g_n": 5e4}, n_th=300.0).with_updates(kappa=500.0),
        branch_policy="farthest",
        variants={"gamma_m": (0.0, 2e-7)},
        t_end_in_rates=10.0,
        stiff=True,
    ),
    "fig5c": FigurePreset(
        tag="fig5c",
        description="phonon-number evolution, kappa=500 and lambda=0.2",
        params=_base(**{**_OPTIMAL, "g_n": 5e4}, n_th=300.0).with_updates(
            kappa=500.0, **{"lambda": 0.2}
        ),
        branch_policy="farthest",
        variants={"gamma_m": (0.0, 2e-7)},
        t_end_in_rates=10.0,
    ),
    "fig6a": FigurePreset(
        tag="fig6a",
        description="S_FF and its gamma=0 approximation, Omega_r=15",
        params=_base(**{**_OPTIMAL, "omega_r": 15.0}),
        branch_policy="farthest",
        x_range=(-2.0, 2.0, 801),
    ),
    "fig6b": FigurePreset(
        tag="fig6b",
        description="S_FF and its gamma=0 approximation, Omega_r=150",
        params=_base(**{**_OPTIMAL, "omega_r": 150.0}),
        branch_policy="farthest",
        x_range=(-2.0, 2.0, 801),
    ),
    "fig7": FigurePreset(
        tag="fig7",
        description="steady n_ss versus Omega_r at the optimal detunings",
        params=_base(**_OPTIMAL, n_th=300.0),
        branch_policy="farthest",
        variants={"gamma_m": (0.0, 2e-7)},
        sweep=SweepSpec(
            axis1=AxisSpec(name="omega_r", min=10.0, max=1e4, count=20, scale="log"),
            preset="fig7",
        ),
    ),
}


def get_preset(tag: str) -> FigurePreset:
    try:
        return PRESETS[tag]
    except KeyError:
        raise ParameterError(
            f"Unknown preset: {tag!r}",
            {"known": sorted(PRESETS)},
            violations=[f"preset must be one of {', '.join(sorted(PRESETS))}"],
        ) from None


def solved(p: ModelParams, policy: BranchPolicy = "nearest") -> ModelParams:
    """`p` with detunings satisfying the three optimal conditions at `p.eta`."""
    return detunings.solve_default(p, options={"branch_policy": policy}).apply(p)


def preparer(preset: FigurePreset) -> Callable[[ModelParams], ModelParams]:
    """Per-cell detuning solver for sweeps, honouring the preset's branch policy."""
    return partial(solved, policy=preset.branch_policy)


def resolve(preset: FigurePreset, p: ModelParams | None = None) -> ModelParams:
    """Preset parameters (or `p`), with detunings solved if the preset needs it."""
    p = preset.params if p is None else p
    if preset.solve_detunings:
        p = solved(p, preset.branch_policy)
    return p


def delta_g_for_eta(p: ModelParams) -> ModelParams:
    """Fix Δ_g so that Im χ₁(ω_m) = +√η', given the current Δ_gr."""
    s = math.sqrt(detunings.eta_prime(p))
    return p.with_updates(
        delta_g=s - OMEGA_M + p.omega_r**2 / (OMEGA_M + p.delta_gr)
    )


def condition_loci(p: ModelParams) -> dict[str, list[float]]:
    """Optimal-condition lines in the (δ_c, Δ_gr) plane with Δ_g set by η.

    The saturation condition at ω_m is the horizontal line
    δ_c = g_N²s/(s² + γ²) − ω_m; the heating-minimum condition holds on the
    vertical lines through the Δ_gr of every positive-branch solution.
    """
    s = math.sqrt(detunings.eta_prime(p))
    return {
        "delta_c": [detunings.delta_c_from_im(s, p)],
        "delta_gr": sorted(
            sol.delta_gr for sol in detunings.solve(p) if sol.sign > 0
        ),
    }


# small enough couplings for a (6, 8, 5, 4) Fock truncation
ORACLE_PARAMS = ModelParams.model_validate(
    {
        "kappa": 0.3,
        "gamma": 0.3,
        "gamma_m": 0.05,
        "lambda": 0.1,
        "g_n": 0.5,
        "omega_r": 0.4,
        "n_th": 0.3,
        "delta_c": -1.0,
        "delta_g": -1.0,
        "delta_gr": -0.5,
    }
)
