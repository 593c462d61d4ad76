from __future__ import annotations

from enum import Enum
from typing import Any, Mapping


class CoolingErrorCode(str, Enum):
    InvalidParameters = "invalid_parameters"
    Pole = "pole"
    Instability = "instability"
    Regime = "regime"
    SingularGenerator = "singular_generator"
    StepStability = "step_stability"
    Dimension = "dimension"
    Truncation = "truncation"
    Convergence = "convergence"
    SingularDenominator = "singular_denominator"


class HybridCoolingError(Exception):
    """Base class of every error raised by hybrid_cooling.

    `details` carries the numbers that triggered the failure so callers
    (and the CLI log line) can report them without parsing the message.
    """

    code: CoolingErrorCode
    name = "HybridCoolingError"

    def __init__(self, message: str, details: Mapping[str, Any] | None = None):
        super().__init__(message)
        self.details: dict[str, Any] = dict(details or {})


class ParameterError(HybridCoolingError):
    code = CoolingErrorCode.InvalidParameters
    name = "ParameterError"

    def __init__(
        self,
        message: str = "Parameters are not admissible",
        details: Mapping[str, Any] | None = None,
        violations: list[str] | None = None,
    ):
        super().__init__(message, details)
        self.violations = list(violations or [])


class PoleError(HybridCoolingError):
    """A susceptibility denominator vanished at the requested frequency."""

    code = CoolingErrorCode.Pole
    name = "PoleError"


class InstabilityError(HybridCoolingError):
    """No steady state: net cooling rate W <= 0 or a non-Hurwitz generator."""

    code = CoolingErrorCode.Instability
    name = "InstabilityError"


class RegimeError(HybridCoolingError):
    """The requested optimal condition has no real solution."""

    code = CoolingErrorCode.Regime
    name = "RegimeError"


class SingularGeneratorError(HybridCoolingError):
    code = CoolingErrorCode.SingularGenerator
    name = "SingularGeneratorError"


class StabilityError(HybridCoolingError):
    """Explicit integration diverged."""

    code = CoolingErrorCode.StepStability
    name = "StabilityError"


class DimensionError(HybridCoolingError):
    code = CoolingErrorCode.Dimension
    name = "DimensionError"


class TruncationError(HybridCoolingError):
    """Fock-space truncation is no longer faithful."""

    code = CoolingErrorCode.Truncation
    name = "TruncationError"


class ConvergenceError(HybridCoolingError):
    code = CoolingErrorCode.Convergence
    name = "ConvergenceError"


class SingularDError(HybridCoolingError):
    """The steady-amplitude denominator D vanished."""

    code = CoolingErrorCode.SingularDenominator
    name = "SingularDError"


def exit_code_for(error: BaseException) -> int:
    """CLI exit status: 1 for invalid input, 2 for numerical failure."""
    return 1 if isinstance(error, ParameterError) else 2
