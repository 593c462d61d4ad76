"""Truncated Fock-space reference for the moment equations.

The four modes are ordered (a, b, E, R) in the tensor product. The density
operator is kept dense, every operator sparse, and the linearized master
equation is integrated with fixed-step RK4.
"""

from __future__ import annotations

import math
from functools import reduce
from typing import Any, Callable, TypedDict
try:
    from typing import NotRequired
except ImportError:  # Python < 3.11
    from typing_extensions import NotRequired

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy import sparse

from .errors import DimensionError, TruncationError
from .log import LogLevel, log
from .moments import MOMENT_NAMES, MomentState
from .params import OMEGA_M, ModelParams

MAX_LEVELS = 8
MAX_HILBERT_DIM = 4096

SparseOp = sparse.csr_matrix
Apply = Callable[["DensityState | NDArray[np.complex128]"], NDArray[np.complex128]]


class FockOptions(TypedDict, total=False):
    dims: NotRequired[tuple[int, int, int, int]]
    dt: NotRequired[float]
    t_end: NotRequired[float]
    sample_every: NotRequired[int]
    truncation_limit: NotRequired[float]


class FockConfig(BaseModel):
    """Truncation and stepping of an oracle run."""

    model_config = ConfigDict(frozen=True)

    dims: tuple[int, int, int, int] = Field(
        (6, 8, 5, 4), description="各モードの準位数 (a, b, E, R)"
    )
    dt: float = Field(0.01, gt=0, description="RK4 の刻み幅 [1/ω_m]")
    t_end: float = Field(10.0, ge=0, description="終了時刻 [1/ω_m]")
    sample_every: int = Field(10, ge=1, description="モーメント抽出の間隔 (ステップ数)")
    truncation_limit: float = Field(1e-3, gt=0, description="最上準位占有の許容値")

    @field_validator("dims")
    @classmethod
    def _check_dims(cls, v: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
        if any(d < 2 or d > MAX_LEVELS for d in v):
            raise ValueError(f"each truncation level must lie in [2, {MAX_LEVELS}]")
        if math.prod(v) > MAX_HILBERT_DIM:
            raise ValueError(f"Hilbert dimension exceeds {MAX_HILBERT_DIM}")
        return v

    @property
    def hilbert_dim(self) -> int:
        return math.prod(self.dims)

    @classmethod
    def from_options(cls, options: FockOptions | None = None) -> "FockConfig":
        return cls.model_validate(dict(options or {}))


class DensityState(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rho: np.ndarray = Field(..., description="密度演算子 (D×D, complex)")
    time: float = Field(0.0, description="時刻 [1/ω_m]")

    def trace(self) -> complex:
        return complex(np.trace(self.rho))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.rho + self.rho.conj().T)
        return float(np.linalg.eigvalsh(herm).min())


class OracleRun(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    states: list[MomentState] = Field(default_factory=list)
    truncation: list[float] = Field(default_factory=list, description="最上準位占有の最大値")
    final: DensityState


def _annihilation(d: int) -> sparse.csr_matrix:
    return sparse.diags(np.sqrt(np.arange(1, d)), offsets=1, format="csr")


def mode_operators(dims: tuple[int, ...]) -> list[sparse.csr_matrix]:
    """Annihilation operators of every mode embedded in the full space."""
    ops = []
    for k, d in enumerate(dims):
        factors = [
            _annihilation(d) if j == k else sparse.identity(dj, format="csr")
            for j, dj in enumerate(dims)
        ]
        ops.append(reduce(lambda x, y: sparse.kron(x, y, format="csr"), factors))
    return ops


def moment_operators(dims: tuple[int, ...]) -> dict[str, sparse.csr_matrix]:
    """Operator whose expectation is each moment, keyed as `MOMENT_NAMES`."""
    a, b, e, r = mode_operators(dims)
    ad, bd, ed, rd = (op.conj().T.tocsr() for op in (a, b, e, r))
    table = {
        "aa": a @ a, "ada": ad @ a, "ba": b @ a, "bad": b @ ad,
        "bb": b @ b, "bdb": bd @ b, "ea": e @ a, "ead": e @ ad,
        "eb": e @ b, "ebd": e @ bd, "ee": e @ e, "ede": ed @ e,
        "ra": r @ a, "rad": r @ ad, "rb": r @ b, "rbd": r @ bd,
        "re": r @ e, "red": r @ ed, "rr": r @ r, "rdr": rd @ r,
    }  # fmt: skip
    return {name: table[name].tocsr() for name in MOMENT_NAMES}


def hamiltonian(p: ModelParams, dims: tuple[int, ...]) -> sparse.csr_matrix:
    a, b, e, r = mode_operators(dims)
    ad, bd, ed, rd = (op.conj().T.tocsr() for op in (a, b, e, r))
    h = (
        -p.delta_c * (ad @ a)
        + OMEGA_M * (bd @ b)
        - p.delta_g * (ed @ e)
        - p.delta_gr * (rd @ r)
        + p.lambda_ * ((ad + a) @ (bd + b))
        + p.g_n * (a @ ed + ad @ e)
        + p.omega_r * (ed @ r + e @ rd)
    )
    return h.tocsr()


def collapse_operators(
    p: ModelParams, dims: tuple[int, ...]
) -> list[tuple[float, sparse.csr_matrix]]:
    """(rate, O) pairs so that the dissipator is Σ rate·L[O]."""
    a, b, e, _ = mode_operators(dims)
    pairs = [
        (2.0 * p.gamma_m * (p.n_th + 1.0), b),
        (2.0 * p.gamma_m * p.n_th, b.conj().T.tocsr()),
        (2.0 * p.kappa, a),
        (2.0 * p.gamma, e),
    ]
    return [(rate, op) for rate, op in pairs if rate != 0]


def build_liouvillian_apply(p: ModelParams, cfg: FockConfig) -> Apply:
    """Right-hand side of the master equation as a function of ρ.

    The coherent part and the anticommutators are folded into the
    non-Hermitian H_eff = H − (i/2)Σ rate·O†O.
    """
    dims = cfg.dims
    size = cfg.hilbert_dim
    h = hamiltonian(p, dims)
    jumps = collapse_operators(p, dims)
    h_eff = h.astype(complex)
    for rate, op in jumps:
        h_eff = h_eff - 0.5j * rate * (op.conj().T @ op)
    h_eff = h_eff.tocsr()
    h_eff_conj = h_eff.conj().tocsr()
    jump_pairs = [(rate, op, op.conj().tocsr()) for rate, op in jumps]

    def apply(state: DensityState | NDArray[np.complex128]) -> NDArray[np.complex128]:
        rho = state.rho if isinstance(state, DensityState) else state
        if rho.shape != (size, size):
            raise DimensionError(
                "density matrix does not match the truncation",
                {"shape": rho.shape, "expected": (size, size)},
            )
        # ρ X† = (X* ρᵀ)ᵀ keeps every product sparse @ dense
        out = -1j * (h_eff @ rho) + 1j * (h_eff_conj @ rho.T).T
        for rate, op, op_conj in jump_pairs:
            out = out + rate * (op @ (op_conj @ rho.T).T)
        return np.asarray(out)

    return apply


def vacuum(cfg: FockConfig) -> DensityState:
    rho = np.zeros((cfg.hilbert_dim, cfg.hilbert_dim), dtype=complex)
    rho[0, 0] = 1.0
    return DensityState(rho=rho, time=0.0)


def thermal_mechanical(cfg: FockConfig, n_b: float) -> DensityState:
    """Vacuum except for a truncated, renormalized thermal mechanical mode."""
    d_b = cfg.dims[1]
    if n_b <= 0:
        return vacuum(cfg)
    weights = (n_b / (n_b + 1.0)) ** np.arange(d_b)
    weights = weights / weights.sum()
    single = [np.eye(d, 1).ravel() for d in cfg.dims]
    diag = reduce(np.kron, [single[0], weights, single[2], single[3]])
    return DensityState(rho=np.diag(diag).astype(complex), time=0.0)


def extract_moments(
    rho: NDArray[np.complex128], ops: dict[str, sparse.csr_matrix], time: float
) -> MomentState:
    """⟨O⟩ = Tr(Oρ) for every moment operator."""
    values = [complex(ops[name].multiply(rho.T).sum()) for name in MOMENT_NAMES]
    return MomentState(time=time, values=values)


def truncation_indicator(rho: NDArray[np.complex128], dims: tuple[int, ...]) -> float:
    """Largest population found on any mode's highest kept level."""
    pops = np.real(np.diag(rho)).reshape(dims)
    return max(float(np.take(pops, -1, axis=k).sum()) for k in range(len(dims)))


def evolve(
    p: ModelParams, cfg: FockConfig, rho0: DensityState | None = None
) -> OracleRun:
    """RK4 on ρ with moment extraction every `cfg.sample_every` steps.

    Raises:
        TruncationError: the highest-level population exceeds
            `cfg.truncation_limit` at a sample.
    """
    rho0 = rho0 if rho0 is not None else vacuum(cfg)
    apply = build_liouvillian_apply(p, cfg)
    ops = moment_operators(cfg.dims)
    dt = cfg.dt
    n_steps = int(round((cfg.t_end - rho0.time) / dt))
    rho = np.array(rho0.rho, dtype=complex)

    states: list[MomentState] = []
    indicators: list[float] = []

    def sample(time: float) -> None:
        indicator = truncation_indicator(rho, cfg.dims)
        if indicator > cfg.truncation_limit:
            raise TruncationError(
                "Fock truncation too small for this run",
                {"time": time, "indicator": indicator, "dims": cfg.dims},
            )
        indicators.append(indicator)
        states.append(extract_moments(rho, ops, time))

    sample(rho0.time)
    for step in range(1, n_steps + 1):
        k1 = apply(rho)
        k2 = apply(rho + 0.5 * dt * k1)
        k3 = apply(rho + 0.5 * dt * k2)
        k4 = apply(rho + dt * k3)
        rho = rho + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if step % cfg.sample_every == 0 or step == n_steps:
            sample(rho0.time + step * dt)

    log(
        LogLevel.DEBUG,
        "oracle run finished",
        {"steps": n_steps, "max_truncation": max(indicators)},
    )
    return OracleRun(
        states=states,
        truncation=indicators,
        final=DensityState(rho=rho, time=rho0.time + n_steps * dt),
    )


def compare(
    oracle: list[MomentState], engine: list[MomentState], floor: float = 1e-8
) -> dict[str, Any]:
    """Worst relative deviation per moment between two sampled runs."""
    worst = {name: 0.0 for name in MOMENT_NAMES}
    for s_o, s_e in zip(oracle, engine):
        for k, name in enumerate(MOMENT_NAMES):
            ref = s_o.values[k]
            if abs(ref) <= floor:
                continue
            worst[name] = max(worst[name], abs(s_e.values[k] - ref) / abs(ref))
    return worst
