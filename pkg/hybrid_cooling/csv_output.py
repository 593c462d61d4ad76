"""CSV emission with lossless float formatting and atomic file writes."""

from __future__ import annotations

import csv
import io
import math
import os
import sys
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence


def format_value(value: Any) -> str:
    """17 significant digits; `nan`, `inf`, `-inf` as literal tokens."""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if isinstance(value, int):
            return str(value)
        return f"{v:.17g}"
    if value is None:
        return ""
    if hasattr(value, "__float__"):
        return format_value(float(value))
    return str(value)


def render(
    fieldnames: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    comments: Sequence[str] = (),
) -> str:
    buf = io.StringIO()
    for line in comments:
        buf.write(f"# {line}\n")
    w = csv.DictWriter(
        buf, fieldnames=list(fieldnames), extrasaction="ignore", lineterminator="\n"
    )
    w.writeheader()
    for row in rows:
        w.writerow({k: format_value(row.get(k)) for k in fieldnames})
    return buf.getvalue()


def write_csv(
    out: str | Path | None,
    fieldnames: Sequence[str],
    rows: Iterable[Mapping[str, Any]],
    comments: Sequence[str] = (),
) -> None:
    """Write to `out`, or stdout when None.

    Files are rendered fully in memory and moved into place, so a failure
    never leaves a partial file behind.
    """
    text = render(fieldnames, rows, comments)
    if out is None:
        sys.stdout.write(text)
        return
    out_path = Path(out)
    tmp_path = out_path.with_name(out_path.name + ".tmp")
    try:
        with open(tmp_path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp_path, out_path)
    finally:
        if tmp_path.exists():
            tmp_path.unlink()
