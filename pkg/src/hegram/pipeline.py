"""Ingestion and preprocessing of hourly meter readings.

Raw measurements are real-valued (kW) on a strict hourly grid.  Before
detection they pass through a fixed flow: normalise to the configured
bounds, multiply by 100, round to the nearest integer.  The result is a
dimensionless integer series in [0, 100] whose distribution shape
(argmax/argmin hours, ordering) survives the transform.  Clamping then
forces every value into exactly one bucket of a layout, which is also
how over-range spikes become detectable: they pile into the top bucket,
which reference data rarely occupies.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import datetime, timedelta
from pathlib import Path
from typing import List, Sequence

import numpy as np

from .buckets import BucketLayout
from .exceptions import (
    ContinuityError,
    CsvParseError,
    DimensionError,
    ScaleRangeError,
)
from .validation import as_int_array

HOURS_PER_DAY = 24
SCALE_TOP = 100


@dataclass(frozen=True)
class MeasurementSeries:
    """Hourly real-valued readings with their timestamps."""

    timestamps: tuple
    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class ScaledSeries:
    """Integer readings in [0, 100] plus the real bounds used to scale."""

    values: np.ndarray
    scale_min: float
    scale_max: float

    def __len__(self) -> int:
        return len(self.values)


def round_half_up(x: float) -> int:
    """Round to the nearest integer, ties away from zero-point-five up."""
    return math.floor(x + 0.5)


def load_csv(path) -> MeasurementSeries:
    """Parse a two-column CSV of ``timestamp,value_kw`` hourly readings.

    The header row is optional.  Timestamps must be ISO-8601, strictly
    increasing, and exactly one hour apart; values must be finite and
    non-negative.  Errors carry the offending 1-based line number.
    """
    path = Path(path)
    timestamps: List[datetime] = []
    values: List[float] = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) < 2:
                raise CsvParseError(f"expected 2 columns, got {len(row)}", lineno)
            ts_text, val_text = row[0].strip(), row[1].strip()
            if lineno == 1 and not _looks_like_timestamp(ts_text):
                continue  # header row
            try:
                ts = datetime.fromisoformat(ts_text)
            except ValueError:
                raise CsvParseError(f"bad timestamp {ts_text!r}", lineno) from None
            try:
                value = float(val_text)
            except ValueError:
                raise CsvParseError(f"bad value {val_text!r}", lineno) from None
            if not math.isfinite(value) or value < 0:
                raise CsvParseError(f"value must be finite and >= 0, got {value}", lineno)
            if timestamps:
                gap = ts - timestamps[-1]
                if gap == timedelta(0):
                    raise ContinuityError(f"duplicate timestamp {ts.isoformat()}")
                if gap != timedelta(hours=1):
                    raise ContinuityError(
                        f"non-hourly spacing before {ts.isoformat()}: {gap}"
                    )
            timestamps.append(ts)
            values.append(value)
    return MeasurementSeries(
        timestamps=tuple(timestamps),
        values=np.array(values, dtype=float),
    )


def _looks_like_timestamp(text: str) -> bool:
    try:
        datetime.fromisoformat(text)
        return True
    except ValueError:
        return False


def scale(
    series: MeasurementSeries | Sequence[float],
    value_min: float,
    value_max: float,
    clamp: bool = True,
) -> ScaledSeries:
    """Map real readings onto the integer range [0, 100].

    ``v`` maps to ``round(100 * (v - value_min) / (value_max - value_min))``.
    With ``clamp`` (the default) out-of-bounds readings saturate at 0 or
    100; without it they raise, which is the right mode when the bounds
    are known to cover the data.
    """
    if value_min >= value_max:
        raise ScaleRangeError(
            f"scale bounds must satisfy min < max, got [{value_min}, {value_max}]"
        )
    raw = series.values if isinstance(series, MeasurementSeries) else np.asarray(series, dtype=float)
    span = value_max - value_min
    out = np.empty(len(raw), dtype=np.int64)
    for i, v in enumerate(raw):
        if not clamp and not (value_min <= v <= value_max):
            raise ScaleRangeError(
                f"value {v} outside scale bounds [{value_min}, {value_max}] "
                "and clamping is disabled"
            )
        scaled = round_half_up(SCALE_TOP * (v - value_min) / span)
        out[i] = min(max(scaled, 0), SCALE_TOP)
    return ScaledSeries(values=out, scale_min=float(value_min), scale_max=float(value_max))


def clamp_for_layout(values, layout: BucketLayout) -> np.ndarray:
    """Force every value into exactly one bucket of ``layout``.

    Values below the layout's range become its minimum; values at or
    above the top boundary become ``value_max - 1`` (the top boundary
    itself belongs to no half-open bucket).  Idempotent.
    """
    if isinstance(values, ScaledSeries):
        values = values.values
    arr = as_int_array(values, "values")
    return np.clip(arr, layout.value_min, layout.value_max - 1)


def build_reference(days: Sequence) -> np.ndarray:
    """Per-hour mean across several full days, rounded to integers.

    Each day must contribute exactly 24 values; the result is the
    24-value profile used as reference data for histogram building.
    """
    if len(days) == 0:
        raise DimensionError("need at least one day to build a reference")
    matrix = []
    for i, day in enumerate(days):
        values = day.values if isinstance(day, ScaledSeries) else day
        arr = as_int_array(values, f"day {i}")
        if len(arr) != HOURS_PER_DAY:
            raise DimensionError(
                f"day {i} has {len(arr)} values, expected {HOURS_PER_DAY}"
            )
        matrix.append(arr)
    stacked = np.stack(matrix)
    n = stacked.shape[0]
    sums = stacked.sum(axis=0)
    # Exact round-half-up of sums/n in integer arithmetic.
    return (2 * sums + n) // (2 * n)


def split_days(values) -> List[np.ndarray]:
    """Split a flat series into consecutive 24-value days."""
    if isinstance(values, ScaledSeries):
        values = values.values
    arr = as_int_array(values, "values")
    if len(arr) == 0 or len(arr) % HOURS_PER_DAY != 0:
        raise DimensionError(
            f"series length {len(arr)} is not a positive multiple of {HOURS_PER_DAY}"
        )
    return [arr[i : i + HOURS_PER_DAY] for i in range(0, len(arr), HOURS_PER_DAY)]
