from .params import (
    OMEGA_M,
    HBAR,
    K_B,
    ModelParams,
    ThermalInput,
    ValidationReport,
    CONFIG_KEYS,
    validate,
    thermal_occupation,
    cooperativity,
    mechanical_quality,
    gamma_m_from_quality,
)
from .config import load_params, read_entries, env_overrides, build_record
from .spectrum import (
    Susceptibilities,
    SpectrumSample,
    CoefficientLimits,
    im_chi1,
    susceptibilities,
    m_factor,
    noise_spectrum,
    saturation_residual,
    extremum_residuals,
    spectrum_gamma0,
    upper_bound_of_im,
    a_plus_upper_of_im,
    a_minus_upper_of_im,
    coefficient_limits,
    heating_coefficient,
    cooling_coefficient,
    spectrum_curves,
)
from .detunings import (
    BranchPolicy,
    SolverOptions,
    Residuals,
    DetuningSolution,
    eta_prime,
    delta_c_critical,
    verify,
    solve,
    solve_default,
)
from .cooling import (
    CoolingReport,
    GroundStateRequirements,
    coefficients,
    cooling_limit,
    report,
    evolution,
    ground_state_requirements,
    rescale_kappa,
    a_plus_optimal,
    eta_condition_holds,
)
from .moments import (
    MOMENT_NAMES,
    N_MOMENTS,
    EvolveOptions,
    MomentState,
    MomentGenerator,
    Trajectory,
    build_generator,
    thermal_initial,
    affine_offset,
    evolve_exact,
    evolve_rk4,
    steady_state,
    check_generator,
)
from .fock_oracle import (
    FockOptions,
    FockConfig,
    DensityState,
    OracleRun,
    build_liouvillian_apply,
    extract_moments,
    compare,
)
from .fock_oracle import evolve as evolve_fock
from .amplitudes import (
    DriveParams,
    SteadyAmplitudes,
    FeasibilityReport,
    steady_amplitudes,
    classical_residuals,
    feasibility,
)
from .sweep import AxisSpec, SweepSpec, parse_axis, run_sweep
from .presets import PRESETS, FigurePreset, get_preset, resolve, preparer, ORACLE_PARAMS
from .errors import (
    CoolingErrorCode,
    HybridCoolingError,
    ParameterError,
    PoleError,
    InstabilityError,
    RegimeError,
    SingularGeneratorError,
    StabilityError,
    DimensionError,
    TruncationError,
    ConvergenceError,
    SingularDError,
)
from .log import LogLevel, Logger, get_level, get_logger, set_logger, make_console_logger

__all__ = [
    # Parameters
    "OMEGA_M",
    "HBAR",
    "K_B",
    "ModelParams",
    "ThermalInput",
    "ValidationReport",
    "CONFIG_KEYS",
    "validate",
    "thermal_occupation",
    "cooperativity",
    "mechanical_quality",
    "gamma_m_from_quality",
    # Config
    "load_params",
    "read_entries",
    "env_overrides",
    "build_record",
    # Spectrum
    "Susceptibilities",
    "SpectrumSample",
    "CoefficientLimits",
    "im_chi1",
    "susceptibilities",
    "m_factor",
    "noise_spectrum",
    "saturation_residual",
    "extremum_residuals",
    "spectrum_gamma0",
    "upper_bound_of_im",
    "a_plus_upper_of_im",
    "a_minus_upper_of_im",
    "coefficient_limits",
    "heating_coefficient",
    "cooling_coefficient",
    "spectrum_curves",
    # Detunings
    "BranchPolicy",
    "SolverOptions",
    "Residuals",
    "DetuningSolution",
    "eta_prime",
    "delta_c_critical",
    "verify",
    "solve",
    "solve_default",
    # Cooling theory
    "CoolingReport",
    "GroundStateRequirements",
    "coefficients",
    "cooling_limit",
    "report",
    "evolution",
    "ground_state_requirements",
    "rescale_kappa",
    "a_plus_optimal",
    "eta_condition_holds",
    # Moment engine
    "MOMENT_NAMES",
    "N_MOMENTS",
    "EvolveOptions",
    "MomentState",
    "MomentGenerator",
    "Trajectory",
    "build_generator",
    "thermal_initial",
    "affine_offset",
    "evolve_exact",
    "evolve_rk4",
    "steady_state",
    "check_generator",
    # Fock-space oracle
    "FockOptions",
    "FockConfig",
    "DensityState",
    "OracleRun",
    "build_liouvillian_apply",
    "extract_moments",
    "compare",
    "evolve_fock",
    # Steady amplitudes
    "DriveParams",
    "SteadyAmplitudes",
    "FeasibilityReport",
    "steady_amplitudes",
    "classical_residuals",
    "feasibility",
    # Sweeps and presets
    "AxisSpec",
    "SweepSpec",
    "parse_axis",
    "run_sweep",
    "PRESETS",
    "FigurePreset",
    "get_preset",
    "resolve",
    "preparer",
    "ORACLE_PARAMS",
    # Errors
    "CoolingErrorCode",
    "HybridCoolingError",
    "ParameterError",
    "PoleError",
    "InstabilityError",
    "RegimeError",
    "SingularGeneratorError",
    "StabilityError",
    "DimensionError",
    "TruncationError",
    "ConvergenceError",
    "SingularDError",
    # Logging
    "LogLevel",
    "Logger",
    "get_logger",
    "get_level",
    "set_logger",
    "make_console_logger",
]
