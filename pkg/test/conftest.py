"""Pytest configuration and fixtures."""

import pytest

from hybrid_cooling import presets
from hybrid_cooling.log import LogLevel, get_level, get_logger, set_logger
from hybrid_cooling.params import ModelParams


@pytest.fixture
def baseline_params() -> ModelParams:
    """Reference parameters of the heatmap and time-evolution presets, detunings unset."""
    return ModelParams.model_validate(
        {
            "kappa": 5.0,
            "gamma": 15.0,
            "lambda": 0.02,
            "g_n": 5000.0,
            "omega_r": 60.0,
            "eta": 0.98,
        }
    )


@pytest.fixture
def solved_params(baseline_params: ModelParams) -> ModelParams:
    """Baseline parameters with the default (nearest) optimal detunings applied."""
    return presets.solved(baseline_params)


@pytest.fixture
def farthest_params(baseline_params: ModelParams) -> ModelParams:
    """Baseline parameters on the farthest positive root, as the moment-based presets use."""
    return presets.solved(baseline_params, "farthest")


@pytest.fixture
def mild_params() -> ModelParams:
    """Weak couplings that a small Fock truncation represents faithfully."""
    return presets.ORACLE_PARAMS


@pytest.fixture
def log_records():
    """Capture log calls at DEBUG and restore the previous sink afterwards."""
    previous = get_logger(), get_level()
    records: list[tuple[LogLevel, str, dict]] = []
    set_logger(lambda lv, msg, extra: records.append((lv, msg, dict(extra))), LogLevel.DEBUG)
    yield records
    set_logger(*previous)
