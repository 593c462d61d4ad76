"""Config-file ingestion for parameter records.

Files are plain `key = value` lines with `#` comments, read with
python-dotenv's parser. Any key may be overridden from the environment
through `HYBRID_COOLING_<KEY>` (upper-case key), and then by explicit
overrides passed by the caller (CLI flags).
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Any, Mapping, TypeVar

from dotenv import dotenv_values
from pydantic import BaseModel, ValidationError

from .errors import ParameterError
from .params import CONFIG_KEYS, ModelParams

ENV_PREFIX = "HYBRID_COOLING_"

_TModel = TypeVar("_TModel", bound=BaseModel)

_NONE_TOKENS = {"", "none", "null"}


def read_entries(path: str | Path | None) -> dict[str, str]:
    """Raw key/value pairs of a config file (empty when `path` is None)."""
    if path is None:
        return {}
    path = Path(path)
    if not path.is_file():
        raise ParameterError(f"Config file not found: {path}", {"path": str(path)})
    return {k: (v or "") for k, v in dotenv_values(path).items()}


def env_overrides(
    keys: tuple[str, ...], env: Mapping[str, str] | None = None
) -> dict[str, str]:
    source = os.environ if env is None else env
    found: dict[str, str] = {}
    for key in keys:
        value = source.get(ENV_PREFIX + key.upper())
        if value is not None:
            found[key] = value
    return found


def _parse_value(key: str, raw: Any) -> float | None:
    if raw is None:
        return None
    if isinstance(raw, (int, float)):
        return float(raw)
    text = str(raw).strip()
    if text.lower() in _NONE_TOKENS:
        return None
    try:
        return float(text)
    except ValueError:
        raise ParameterError(
            f"Value for '{key}' is not a number: {text!r}", {"key": key, "value": text}
        ) from None


def build_record(
    model: type[_TModel],
    keys: tuple[str, ...],
    entries: Mapping[str, Any],
) -> _TModel:
    unknown = sorted(set(entries) - set(keys))
    if unknown:
        raise ParameterError(
            f"Unknown config keys: {', '.join(unknown)}",
            {"unknown": unknown},
            violations=[f"unknown key '{k}'" for k in unknown],
        )
    values = {k: _parse_value(k, v) for k, v in entries.items()}
    values = {k: v for k, v in values.items() if v is not None}
    try:
        return model.model_validate(values)
    except ValidationError as e:
        raise ParameterError(
            f"Invalid {model.__name__}: {e.error_count()} error(s)",
            {"errors": e.errors(include_url=False)},
            violations=[f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors()],
        ) from e


def load_params(
    path: str | Path | None = None,
    *,
    base: ModelParams | None = None,
    overrides: Mapping[str, Any] | None = None,
    env: Mapping[str, str] | None = None,
) -> ModelParams:
    """Build ModelParams from (in increasing priority) base, file, env, overrides.

    Examples:
        ```python
        p = load_params("baseline.conf", overrides={"eta": 0.99})
        ```
    """
    entries: dict[str, Any] = dict(base.as_config()) if base is not None else {}
    entries.update(read_entries(path))
    entries.update(env_overrides(CONFIG_KEYS, env))
    entries.update(overrides or {})
    return build_record(ModelParams, CONFIG_KEYS, entries)
