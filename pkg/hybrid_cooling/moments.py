"""Second-order moment dynamics of the linearized four-mode model.

The 20 complex moment equations mix moments with their own conjugates, so
they are linear over the reals only. They are assembled as a real system of
dimension 40 acting on x = [Re m; Im m], dx/dt = A x + c. Fixed points and
stability are taken on the 36-dimensional block with real occupations.
"""

from __future__ import annotations

import math
from typing import Any, Literal, TypedDict
try:
    from typing import NotRequired
except ImportError:  # Python < 3.11
    from typing_extensions import NotRequired

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy import linalg

from .errors import (
    DimensionError,
    InstabilityError,
    ParameterError,
    SingularGeneratorError,
    StabilityError,
)
from .log import LogLevel, log
from .params import OMEGA_M, ModelParams

MOMENT_NAMES: tuple[str, ...] = (
    "aa", "ada", "ba", "bad", "bb", "bdb",
    "ea", "ead", "eb", "ebd", "ee", "ede",
    "ra", "rad", "rb", "rbd", "re", "red", "rr", "rdr",
)  # fmt: skip
N_MOMENTS = len(MOMENT_NAMES)
DIAGONAL = ("ada", "bdb", "ede", "rdr")
_IDX = {name: i for i, name in enumerate(MOMENT_NAMES)}
PHONON_INDEX = _IDX["bdb"]
# Im parts of the occupations evolve on their own and vanish for physical states.
_IMAG_DIAGONAL = tuple(N_MOMENTS + _IDX[name] for name in DIAGONAL)
REDUCED_INDEX = np.array(
    [k for k in range(2 * N_MOMENTS) if k not in _IMAG_DIAGONAL], dtype=int
)

RK4_STABILITY_LIMIT = 2.8
DIVERGENCE_LIMIT = 1e12
_COND_LIMIT = 1e8
_SINGULAR_TOL = 1e-12
_HURWITZ_TOL = -1e-12

# (row, col, coefficient, acts on the conjugate)
Term = tuple[int, int, complex, bool]


class EvolveOptions(TypedDict, total=False):
    """Propagation options.

    Attributes:
        method: "exact" (default) or "rk4".
        dt: RK4 step, required for "rk4".
        stride: RK4 sampling stride in steps (default 1).
        force: allow RK4 on presets flagged as stiff.
    """

    method: NotRequired[Literal["exact", "rk4"]]
    dt: NotRequired[float]
    stride: NotRequired[int]
    force: NotRequired[bool]


class MomentState(BaseModel):
    """20 complex moments at one time, in `MOMENT_NAMES` order."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    time: float = Field(..., description="時刻 [1/ω_m]")
    values: np.ndarray = Field(..., description="20 個の二次モーメント (complex)")

    @field_validator("values", mode="before")
    @classmethod
    def _as_complex_vector(cls, v: Any) -> np.ndarray:
        arr = np.asarray(v, dtype=complex).reshape(-1)
        if arr.shape != (N_MOMENTS,):
            raise ValueError(f"expected {N_MOMENTS} moments, got {arr.size}")
        return arr

    def __getitem__(self, name: str) -> complex:
        return complex(self.values[_IDX[name]])

    @property
    def phonon(self) -> float:
        return float(self.values[PHONON_INDEX].real)

    def as_real(self) -> NDArray[np.float64]:
        return np.concatenate([self.values.real, self.values.imag])

    @classmethod
    def from_real(cls, time: float, x: ArrayLike) -> "MomentState":
        x = np.asarray(x, dtype=float)
        return cls(time=time, values=x[:N_MOMENTS] + 1j * x[N_MOMENTS:])

    def is_physical(self, tol: float = 1e-9) -> bool:
        """Occupation moments real and non-negative within `tol`."""
        for name in DIAGONAL:
            z = self[name]
            if abs(z.imag) >= tol * (1.0 + abs(z)) or z.real <= -tol:
                return False
        return True


class MomentGenerator(BaseModel):
    """Real-linear generator dx/dt = matrix @ x + constant."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    matrix: np.ndarray = Field(..., description="40×40 実行列")
    constant: np.ndarray = Field(..., description="40 次元の非斉次項")

    def apply(self, x: ArrayLike) -> NDArray[np.float64]:
        return self.matrix @ np.asarray(x, dtype=float) + self.constant

    def derivative(self, values: ArrayLike) -> NDArray[np.complex128]:
        """d m/dt for complex moments `values`."""
        v = np.asarray(values, dtype=complex)
        dx = self.apply(np.concatenate([v.real, v.imag]))
        return dx[:N_MOMENTS] + 1j * dx[N_MOMENTS:]

    def eigenvalues(self) -> NDArray[np.complex128]:
        return linalg.eigvals(self.matrix)

    def reduced(self) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        """Generator restricted to the 36 components left after dropping Im⟨X†X⟩.

        The dropped rows only involve the dropped components, so the
        subspace where they vanish is invariant. ⟨R†R⟩ has no damping of
        its own and its imaginary row is identically zero, which makes the
        full 40-dimensional matrix singular for every parameter set.
        """
        k = REDUCED_INDEX
        return self.matrix[np.ix_(k, k)], self.constant[k]

    def spectral_radius(self) -> float:
        return float(np.max(np.abs(self.eigenvalues())))


class Trajectory(BaseModel):
    model_config = ConfigDict(frozen=True)

    states: list[MomentState] = Field(default_factory=list)

    @property
    def times(self) -> NDArray[np.float64]:
        return np.array([s.time for s in self.states])

    @property
    def phonon(self) -> NDArray[np.float64]:
        return np.array([s.phonon for s in self.states])

    @property
    def final(self) -> MomentState:
        return self.states[-1]


def moment_terms(p: ModelParams) -> tuple[list[Term], NDArray[np.complex128]]:
    """Coefficient table of the moment equations and their inhomogeneity."""
    i = 1j
    dc, dg, dgr = p.delta_c, p.delta_g, p.delta_gr
    k, g, gm = p.kappa, p.gamma, p.gamma_m
    lam, gn, om, wm = p.lambda_, p.g_n, p.omega_r, OMEGA_M

    rows: dict[str, list[tuple[str, complex, bool]]] = {
        "aa": [
            ("aa", 2 * (i * dc - k), False),
            ("ea", -2 * i * gn, False),
            ("bad", -2 * i * lam, True),
            ("ba", -2 * i * lam, False),
        ],
        "ada": [
            ("ada", -2 * k, False),
            ("ead", -i * gn, False),
            ("ead", i * gn, True),
            ("ba", -i * lam, True),
            ("ba", i * lam, False),
            ("bad", -i * lam, False),
            ("bad", i * lam, True),
        ],
        "ba": [
            ("ba", i * (dc - wm) - k - gm, False),
            ("eb", -i * gn, False),
            ("aa", -i * lam, False),
            ("ada", -i * lam, False),
            ("bb", -i * lam, False),
            ("bdb", -i * lam, False),
        ],
        "bad": [
            ("bad", -(i * (dc + wm) + k + gm), False),
            ("ebd", i * gn, True),
            ("aa", -i * lam, True),
            ("ada", -i * lam, False),
            ("bb", i * lam, False),
            ("bdb", i * lam, False),
        ],
        "bb": [
            ("bb", -2 * (i * wm + gm), False),
            ("ba", -2 * i * lam, False),
            ("bad", -2 * i * lam, False),
        ],
        "bdb": [
            ("bdb", -2 * gm, False),
            ("ba", -i * lam, True),
            ("ba", i * lam, False),
            ("bad", -i * lam, True),
            ("bad", i * lam, False),
        ],
        "ea": [
            ("ea", i * (dg + dc) - k - g, False),
            ("aa", -i * gn, False),
            ("ee", -i * gn, False),
            ("ra", -i * om, False),
            ("ebd", -i * lam, False),
            ("eb", -i * lam, False),
        ],
        "ead": [
            ("ead", i * (dg - dc) - k - g, False),
            ("ada", -i * gn, False),
            ("ede", i * gn, False),
            ("rad", -i * om, False),
            ("ebd", i * lam, False),
            ("eb", i * lam, False),
        ],
        "eb": [
            ("eb", i * (dg - wm) - g - gm, False),
            ("ba", -i * gn, False),
            ("rb", -i * om, False),
            ("ead", -i * lam, False),
            ("ea", -i * lam, False),
        ],
        "ebd": [
            ("ebd", i * (dg + wm) - g - gm, False),
            ("bad", -i * gn, True),
            ("rbd", -i * om, False),
            ("ead", i * lam, False),
            ("ea", i * lam, False),
        ],
        "ee": [
            ("ee", 2 * (i * dg - g), False),
            ("ea", -2 * i * gn, False),
            ("re", -2 * i * om, False),
        ],
        "ede": [
            ("ede", -2 * g, False),
            ("ead", -i * gn, True),
            ("ead", i * gn, False),
            ("red", -i * om, False),
            ("red", i * om, True),
        ],
        "ra": [
            ("ra", i * (dgr + dc) - k, False),
            ("re", -i * gn, False),
            ("ea", -i * om, False),
            ("rbd", -i * lam, False),
            ("rb", -i * lam, False),
        ],
        "rad": [
            ("rad", i * (dgr - dc) - k, False),
            ("red", i * gn, False),
            ("ead", -i * om, False),
            ("rbd", i * lam, False),
            ("rb", i * lam, False),
        ],
        "rb": [
            ("rb", i * (dgr - wm) - gm, False),
            ("eb", -i * om, False),
            ("rad", -i * lam, False),
            ("ra", -i * lam, False),
        ],
        "rbd": [
            ("rbd", i * (dgr + wm) - gm, False),
            ("ebd", -i * om, False),
            ("rad", i * lam, False),
            ("ra", i * lam, False),
        ],
        "re": [
            ("re", i * (dgr + dg) - g, False),
            ("ra", -i * gn, False),
            ("rr", -i * om, False),
            ("ee", -i * om, False),
        ],
        "red": [
            ("red", i * (dgr - dg) - g, False),
            ("rad", i * gn, False),
            ("rdr", i * om, False),
            ("ede", -i * om, False),
        ],
        "rr": [
            ("rr", 2 * i * dgr, False),
            ("re", -2 * i * om, False),
        ],
        "rdr": [
            ("red", i * om, False),
            ("red", -i * om, True),
        ],
    }

    terms = [
        (_IDX[row], _IDX[col], complex(coef), conj)
        for row, entries in rows.items()
        for col, coef, conj in entries
    ]
    constant = np.zeros(N_MOMENTS, dtype=complex)
    constant[_IDX["ba"]] = -i * lam
    constant[_IDX["bdb"]] = 2 * gm * p.n_th
    return terms, constant


def build_generator(p: ModelParams) -> MomentGenerator:
    terms, constant = moment_terms(p)
    n = N_MOMENTS
    a = np.zeros((2 * n, 2 * n))
    for row, col, z, conj in terms:
        s = -1.0 if conj else 1.0
        a[row, col] += z.real
        a[row, n + col] += -s * z.imag
        a[n + row, col] += z.imag
        a[n + row, n + col] += s * z.real
    return MomentGenerator(
        matrix=a, constant=np.concatenate([constant.real, constant.imag])
    )


def thermal_initial(p: ModelParams) -> MomentState:
    """Mechanical mode thermal at n_th, every other fluctuation in vacuum."""
    values = np.zeros(N_MOMENTS, dtype=complex)
    values[PHONON_INDEX] = p.n_th
    return MomentState(time=0.0, values=values)


def _embed(y: NDArray[np.float64]) -> NDArray[np.float64]:
    x = np.zeros(2 * N_MOMENTS)
    x[REDUCED_INDEX] = y
    return x


def affine_offset(gen: MomentGenerator) -> NDArray[np.float64]:
    """Fixed point x* with matrix @ x* + constant = 0 and real occupations.

    Raises:
        SingularGeneratorError: the reduced generator matrix is singular.
    """
    check_generator(gen)
    a, c = gen.reduced()
    eig = np.abs(linalg.eigvals(a))
    if eig.min() <= _SINGULAR_TOL * max(1.0, eig.max()):
        raise SingularGeneratorError(
            "generator matrix is singular", {"min_abs_eigenvalue": float(eig.min())}
        )
    return _embed(linalg.solve(a, -c))


def _check_grid(s0: MomentState, t_grid: ArrayLike) -> NDArray[np.float64]:
    t = np.asarray(t_grid, dtype=float).reshape(-1)
    if t.size == 0:
        raise ParameterError("empty time grid", violations=["t_grid must be non-empty"])
    if t[0] < s0.time or np.any(np.diff(t) <= 0):
        raise ParameterError(
            "time grid must increase strictly from the initial time",
            {"t0": s0.time},
            violations=["t_grid strictly increasing from s0.time"],
        )
    return t


def _evolve_augmented(
    gen: MomentGenerator, x0: NDArray[np.float64], t: NDArray[np.float64], t0: float
) -> list[NDArray[np.float64]]:
    n = gen.matrix.shape[0]
    aug = np.zeros((n + 1, n + 1))
    aug[:n, :n] = gen.matrix
    aug[:n, n] = gen.constant
    cache: dict[float, NDArray[np.float64]] = {}
    y = np.append(x0, 1.0)
    out = []
    prev = t0
    for tk in t:
        step = float(tk - prev)
        if step not in cache:
            cache[step] = linalg.expm(aug * step)
        y = cache[step] @ y
        out.append(y[:n].copy())
        prev = tk
    return out


def evolve_exact(
    gen: MomentGenerator, s0: MomentState, t_grid: ArrayLike
) -> Trajectory:
    """Closed-form propagation of the linear system onto `t_grid`.

    Uses the eigendecomposition of the reduced generator when the initial
    occupations are real and the basis is well conditioned and nonsingular.
    Falls back to the augmented matrix exponential of the full system.
    """
    check_generator(gen)
    t = _check_grid(s0, t_grid)
    x0 = s0.as_real()
    xs: list[NDArray[np.float64]]
    try:
        if np.any(x0[list(_IMAG_DIAGONAL)] != 0.0):
            raise SingularGeneratorError("initial occupations are not real")
        x_star = affine_offset(gen)
        a, _ = gen.reduced()
        w, v = linalg.eig(a)
        if np.linalg.cond(v) > _COND_LIMIT:
            raise SingularGeneratorError("eigenbasis is ill-conditioned")
        coeffs = linalg.solve(v, (x0 - x_star)[REDUCED_INDEX])
        tau = t - s0.time
        modes = v @ (np.exp(np.outer(w, tau)) * coeffs[:, None])
        xs = [x_star + _embed(modes[:, k].real) for k in range(t.size)]
    except SingularGeneratorError as e:
        log(LogLevel.DEBUG, "falling back to augmented exponential", {"reason": str(e)})
        xs = _evolve_augmented(gen, x0, t, s0.time)

    states = [MomentState.from_real(float(tk), xk) for tk, xk in zip(t, xs)]
    if t[0] == s0.time:
        states[0] = s0
    return Trajectory(states=states)


def evolve_rk4(
    gen: MomentGenerator,
    s0: MomentState,
    dt: float,
    t_end: float,
    stride: int = 1,
) -> Trajectory:
    """Classical fixed-step RK4, sampled every `stride` steps.

    The last sample is always taken at `t_end`.

    Raises:
        ParameterError: `t_end - s0.time` is not a whole number of steps.
        StabilityError: some moment exceeds 1e12 in magnitude.
    """
    check_generator(gen)
    if dt <= 0 or stride < 1:
        raise ParameterError(
            "dt must be positive and stride at least 1",
            {"dt": dt, "stride": stride},
            violations=["dt > 0", "stride >= 1"],
        )
    rho = gen.spectral_radius()
    if rho > 0 and dt >= RK4_STABILITY_LIMIT / rho:
        log(
            LogLevel.WARN,
            "RK4 step exceeds the stability bound",
            {"dt": dt, "bound": RK4_STABILITY_LIMIT / rho},
        )
    span = (t_end - s0.time) / dt
    n_steps = int(round(span))
    if n_steps < 1 or abs(span - n_steps) > 1e-9 * max(1.0, span):
        raise ParameterError(
            "t_end must lie a whole number of steps after the initial time",
            {"t0": s0.time, "t_end": t_end, "dt": dt},
            violations=["(t_end - t0) / dt is a positive integer"],
        )
    a, c = gen.matrix, gen.constant
    x = s0.as_real()
    states = [s0]
    for step in range(1, n_steps + 1):
        k1 = a @ x + c
        k2 = a @ (x + 0.5 * dt * k1) + c
        k3 = a @ (x + 0.5 * dt * k2) + c
        k4 = a @ (x + dt * k3) + c
        x = x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > DIVERGENCE_LIMIT:
            raise StabilityError(
                "RK4 integration diverged", {"step": step, "dt": dt, "rho": rho}
            )
        if step % stride == 0 or step == n_steps:
            tk = t_end if step == n_steps else s0.time + step * dt
            states.append(MomentState.from_real(tk, x))
    return Trajectory(states=states)


def steady_state(gen: MomentGenerator) -> MomentState:
    """t → ∞ limit of the moment dynamics.

    Raises:
        InstabilityError: some eigenvalue of the reduced generator has real
            part ≥ −1e-12.
    """
    check_generator(gen)
    a, c = gen.reduced()
    max_re = float(np.max(linalg.eigvals(a).real))
    if max_re >= _HURWITZ_TOL:
        raise InstabilityError(
            "generator is not Hurwitz-stable", {"max_real_eigenvalue": max_re}
        )
    return MomentState.from_real(math.inf, _embed(linalg.solve(a, -c)))


def check_generator(gen: MomentGenerator) -> None:
    n = 2 * N_MOMENTS
    if gen.matrix.shape != (n, n) or gen.constant.shape != (n,):
        raise DimensionError(
            "generator has the wrong shape",
            {"matrix": gen.matrix.shape, "constant": gen.constant.shape},
        )
