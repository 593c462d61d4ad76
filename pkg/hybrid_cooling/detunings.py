"""Solver for the three optimal detuning conditions.

With u = Δ_g − ω_m, the heating-minimum condition fixes
Δ_gr = Ω_r²/u + ω_m, after which Im χ₁(ω_m) = X reduces to the quadratic

    u² + (2 − X)u + Ω_r²(2 − X)/2 = 0,

solved for X = ±√η' (the two signs are the two branches). δ_c then follows
from the saturation condition at ω_m using the root's own X.
"""

from __future__ import annotations

import math
from typing import Literal, TypedDict
try:
    from typing import NotRequired
except ImportError:  # Python < 3.11
    from typing_extensions import NotRequired

from pydantic import BaseModel, ConfigDict, Field

from .errors import ParameterError, PoleError, RegimeError
from .log import LogLevel, log
from .params import OMEGA_M, ModelParams
from .spectrum import POLE_TOL, im_chi1, m_factor, saturation_residual

BranchPolicy = Literal["nearest", "farthest"]


class SolverOptions(TypedDict, total=False):
    """Options for `solve_default`.

    Attributes:
        branch_policy: "nearest" (default) picks the root with the smallest
            |Δ_g − ω_m|; "farthest" picks the largest one on the
            Im χ₁(ω_m) = +√η' branch.
    """

    branch_policy: NotRequired[BranchPolicy]


class Residuals(BaseModel):
    model_config = ConfigDict(frozen=True)

    r24: float = Field(..., description="Δ_g − ω_m − Ω_r²/(Δ_gr − ω_m)")
    r28: float = Field(..., description="ω_m + δ_c − g_N² Im χ₁(ω_m)/|χ₁(ω_m)|²")
    r_m: float = Field(..., description="(M(ω_m) − η/(1−η))/(η/(1−η))")


class DetuningSolution(BaseModel):
    """One real root of the optimal conditions."""

    model_config = ConfigDict(frozen=True)

    delta_g: float = Field(..., description="原子離調 Δ_g")
    delta_gr: float = Field(..., description="二光子離調 Δ_gr")
    delta_c: float = Field(..., description="実効共振器離調 δ_c")
    eta: float = Field(..., description="目標比 η")
    eta_prime: float = Field(..., description="η' = γg_N²η/(κ(1−η)) − γ²")
    sign: Literal[1, -1] = Field(..., description="Im χ₁(ω_m) の符号")
    root_index: int = Field(..., description="二次方程式の根の番号 (0: 大きい方)")
    residuals: Residuals

    @property
    def branch(self) -> str:
        return f"{'+' if self.sign > 0 else '-'}{self.root_index}"

    def apply(self, p: ModelParams) -> ModelParams:
        """`p` with this solution's detunings and η."""
        return p.with_updates(
            delta_g=self.delta_g,
            delta_gr=self.delta_gr,
            delta_c=self.delta_c,
            eta=self.eta,
        )


def _resolve_eta(p: ModelParams, eta: float | None) -> float:
    value = p.eta if eta is None else eta
    if value is None:
        raise ParameterError("eta is required", violations=["eta must be set"])
    if not 0.0 < value < 1.0:
        raise ParameterError(
            f"eta={value!r} outside (0, 1)",
            {"eta": value},
            violations=["eta in open interval (0,1)"],
        )
    return value


def eta_prime(p: ModelParams, eta: float | None = None) -> float:
    """η' = (γg_N²/κ)·η/(1−η) − γ², the square of the required Im χ₁(ω_m).

    Raises:
        RegimeError: η' ≤ 0, no real branch exists.
    """
    eta = _resolve_eta(p, eta)
    value = p.gamma * p.g_n**2 / p.kappa * eta / (1.0 - eta) - p.gamma**2
    if value <= 0:
        raise RegimeError(
            f"eta_prime={value!r} is not positive; no real detuning branch",
            {"eta": eta, "eta_prime": value},
        )
    return value


def _quadratic_roots(b: float, c: float) -> list[float]:
    """Real roots of u² + bu + c = 0, larger magnitude first."""
    disc = b * b - 4.0 * c
    if disc < 0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b))
    if q == 0:
        return [0.0]
    big, small = q, c / q
    if disc == 0 or big == small:
        return [big]
    return [big, small]


def delta_c_from_im(x: float, p: ModelParams) -> float:
    """δ_c saturating the bound at ω_m when Im χ₁(ω_m) = x."""
    return p.g_n**2 * x / (x**2 + p.gamma**2) - OMEGA_M


def delta_c_critical(p: ModelParams) -> float:
    """Root δ_c^cri of the saturation condition at ω_m for the current Δ_g, Δ_gr."""
    return delta_c_from_im(im_chi1(OMEGA_M, p), p)


def verify(p: ModelParams) -> Residuals:
    """Residual certificates of the three optimal conditions, computed afresh.

    `r_m` is `nan` when `p.eta` is unset.
    """
    r24 = im_chi1(-OMEGA_M, p)
    r28 = saturation_residual(OMEGA_M, p)
    if p.eta is None:
        r_m = math.nan
    else:
        target = p.eta / (1.0 - p.eta)
        r_m = (m_factor(OMEGA_M, p) - target) / target
    return Residuals(r24=r24, r28=r28, r_m=r_m)


def solve(p: ModelParams, eta: float | None = None) -> list[DetuningSolution]:
    """Every real root of the optimal conditions, sorted by |Δ_g − ω_m|.

    With Ω_r = 0 the only root per branch is u = X − 2ω_m and Δ_gr = ω_m;
    the heating minimum is then out of reach and shows up in `r24`.

    Raises:
        RegimeError: η' ≤ 0 or no branch has a real root.
        PoleError: a root lands on Δ_g = ω_m while Ω_r ≠ 0.
    """
    eta = _resolve_eta(p, eta)
    ep = eta_prime(p, eta)
    s = math.sqrt(ep)
    omega_r2 = p.omega_r**2

    solutions: list[DetuningSolution] = []
    for sign in (1, -1):
        x = sign * s
        b = 2.0 * OMEGA_M - x
        roots = _quadratic_roots(b, omega_r2 * b / 2.0)
        log(
            LogLevel.DEBUG,
            "detuning branch enumerated",
            {"sign": sign, "roots": roots},
        )
        for index, u in enumerate(roots):
            if u == 0:
                if omega_r2 == 0:
                    # R mode decoupled: the quadratic factors as u(u + b), u = 0 fixes no Δ_gr
                    continue
                raise PoleError(
                    "root lands on delta_g = omega_m", {"sign": sign, "eta": eta}
                )
            if abs(omega_r2 + 2.0 * OMEGA_M * u) < POLE_TOL:
                continue
            candidate = p.with_updates(
                delta_g=u + OMEGA_M,
                delta_gr=omega_r2 / u + OMEGA_M,
                delta_c=delta_c_from_im(x, p),
                eta=eta,
            )
            solutions.append(
                DetuningSolution(
                    delta_g=candidate.delta_g,
                    delta_gr=candidate.delta_gr,
                    delta_c=candidate.delta_c,
                    eta=eta,
                    eta_prime=ep,
                    sign=sign,
                    root_index=index,
                    residuals=verify(candidate),
                )
            )

    if not solutions:
        raise RegimeError(
            "optimal conditions have no real root", {"eta": eta, "eta_prime": ep}
        )
    solutions.sort(key=lambda sol: abs(sol.delta_g - OMEGA_M))
    return solutions


def solve_default(
    p: ModelParams,
    eta: float | None = None,
    options: SolverOptions | None = None,
) -> DetuningSolution:
    """Deterministic choice among `solve`'s roots per `branch_policy`."""
    policy = (options or {}).get("branch_policy", "nearest")
    solutions = solve(p, eta)
    if policy == "nearest":
        return solutions[0]
    if policy == "farthest":
        positive = [sol for sol in solutions if sol.sign > 0]
        if not positive:
            raise RegimeError("no root on the positive branch", {"eta": eta})
        return positive[-1]
    raise ParameterError(
        f"Unknown branch policy: {policy!r}",
        violations=["branch_policy must be 'nearest' or 'farthest'"],
    )

