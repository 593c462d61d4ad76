"""Two-dimensional parameter grids evaluated in a worker pool.

Cells are submitted to a `ThreadPoolExecutor` and collected with `map`, so
the row order follows the grid index and not completion order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Literal

import numpy as np
from numpy.typing import NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from . import cooling, moments
from .errors import HybridCoolingError, ParameterError
from .log import LogLevel, log
from .params import CONFIG_KEYS, ModelParams

Prepare = Callable[[ModelParams], ModelParams]
Row = dict[str, float]


class AxisSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="掃引するパラメータ名 (設定キー)")
    min: float
    max: float
    count: int = Field(..., ge=2)
    scale: Literal["linear", "log"] = "linear"

    @model_validator(mode="after")
    def _check(self) -> "AxisSpec":
        if self.name not in CONFIG_KEYS:
            raise ValueError(f"unknown parameter '{self.name}'")
        if self.scale == "log" and self.min <= 0:
            raise ValueError("log axes require min > 0")
        return self

    def values(self) -> NDArray[np.float64]:
        if self.scale == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


class SweepSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    axis1: AxisSpec
    axis2: AxisSpec | None = None
    preset: str | None = Field(None, description="図のプリセット名")

    def points(self) -> list[tuple[float, float | None]]:
        xs = self.axis1.values()
        if self.axis2 is None:
            return [(float(x), None) for x in xs]
        ys = self.axis2.values()
        return [(float(x), float(y)) for x in xs for y in ys]


def parse_axis(text: str) -> AxisSpec:
    """`name:min:max:count[:log]` as accepted on the command line."""
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ParameterError(
            f"Malformed axis {text!r}", violations=["axis is name:min:max:count[:log]"]
        )
    try:
        return AxisSpec(
            name=parts[0],
            min=float(parts[1]),
            max=float(parts[2]),
            count=int(parts[3]),
            scale=parts[4] if len(parts) == 5 else "linear",  # type: ignore[arg-type]
        )
    except ValueError as e:
        raise ParameterError(f"Invalid axis {text!r}: {e}", violations=[str(e)]) from e


def theory_row(p: ModelParams, numeric: bool = False) -> Row:
    """n_ss from the rate equations, and optionally from the moment steady state.

    Cells in the heating region or on a pole come back as `nan`.
    """
    row: Row = {"w": math.nan, "n_ss_theory": math.nan}
    try:
        r = cooling.report(p)
        row["w"] = r.w
        row["n_ss_theory"] = r.n_ss
    except HybridCoolingError as e:
        log(LogLevel.DEBUG, "theory cell skipped", {"reason": e.name})
    if numeric:
        row["n_ss_numeric"] = math.nan
        try:
            steady = moments.steady_state(moments.build_generator(p))
            row["n_ss_numeric"] = steady.phonon
        except HybridCoolingError as e:
            log(LogLevel.DEBUG, "numeric cell skipped", {"reason": e.name})
    return row


def run_sweep(
    base: ModelParams,
    spec: SweepSpec,
    *,
    prepare: Prepare | None = None,
    numeric: bool = False,
    threads: int = 1,
) -> list[Row]:
    """Evaluate every grid point; `prepare` completes each cell's parameters."""

    def cell(point: tuple[float, float | None]) -> Row:
        x, y = point
        updates = {spec.axis1.name: x}
        if spec.axis2 is not None:
            updates[spec.axis2.name] = y
        p = base.with_updates(**updates)
        row: Row = {spec.axis1.name: x}
        if spec.axis2 is not None:
            row[spec.axis2.name] = y  # type: ignore[assignment]
        try:
            if prepare is not None:
                p = prepare(p)
        except HybridCoolingError as e:
            log(LogLevel.DEBUG, "cell preparation failed", {"reason": e.name})
            row.update({"w": math.nan, "n_ss_theory": math.nan})
            if numeric:
                row["n_ss_numeric"] = math.nan
            return row
        row.update(theory_row(p, numeric))
        return row

    points = spec.points()
    log(
        LogLevel.INFO,
        "sweep started",
        {"cells": len(points), "threads": threads, "preset": spec.preset},
    )
    if threads <= 1:
        rows = [cell(pt) for pt in points]
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            rows = list(executor.map(cell, points))
    log(LogLevel.INFO, "sweep finished", {"cells": len(rows)})
    return rows
