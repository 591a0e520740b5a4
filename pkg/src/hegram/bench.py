"""Clear-input sizing and the benchmark grid runner.

Sizing counts plain-input bytes only: every value fits one byte after
scaling.  A detection circuit reads 24 readings per day, three values
per bucket (range pair plus count), and the threshold; a histogram-
building circuit reads 24 readings per day and two values per bucket
(the range pair).  The benchmark runner executes a (days, buckets) grid
on a chosen backend and reports per-category operation counts, wall-
clock timings, sizes, and the total-operation ratios between doubled
cells.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .contexts import ContextConfig
from .detector import (
    DetectorConfig,
    DetectionRun,
    TIMING_DISCLAIMER,
    run_uc1,
    run_uc2,
    run_uc3,
)
from .buckets import Histogram, layout_for_buckets
from .core import build_histogram
from .contexts import make_context
from .exceptions import ConfigurationError, HegramError
from .pipeline import build_reference, clamp_for_layout
from .scenarios import synthetic_reference_days
from .validation import check_positive_int

PHASE_DETECTION = "detection"
PHASE_HISTOGRAM = "histogram_build"

HOURS = 24

CSV_COLUMNS = [
    "days",
    "buckets",
    "phase",
    "programmable_bootstrap",
    "key_switch",
    "clear_add",
    "encrypted_add",
    "clear_multiply",
    "encrypted_negation",
    "total_operations",
    "clear_input_size_bytes",
    "setup_seconds",
    "keygen_seconds",
    "execution_seconds",
]

_COUNTER_TO_COLUMN = {
    "pbs": "programmable_bootstrap",
    "key_switch": "key_switch",
    "clear_add": "clear_add",
    "encrypted_add": "encrypted_add",
    "clear_mul": "clear_multiply",
    "encrypted_neg": "encrypted_negation",
}


def clear_input_size(days: int, buckets: int, phase: str = PHASE_DETECTION) -> int:
    """Plain-input size in bytes for one circuit configuration.

    detection:       24 * days + 3 * buckets + 1
    histogram_build: 24 * days + 2 * buckets
    """
    check_positive_int(days, "days")
    check_positive_int(buckets, "buckets")
    if phase == PHASE_DETECTION:
        return HOURS * days + 3 * buckets + 1
    if phase == PHASE_HISTOGRAM:
        return HOURS * days + 2 * buckets
    raise ConfigurationError(
        f"unknown phase {phase!r}; expected {PHASE_DETECTION!r} or {PHASE_HISTOGRAM!r}"
    )


@dataclass
class BenchCell:
    days: int
    buckets: int
    ok: bool
    error: Optional[str] = None
    rows: List[Dict] = field(default_factory=list)  # one per circuit phase
    total_ops: int = 0

    def as_dict(self) -> Dict:
        return {
            "days": self.days,
            "buckets": self.buckets,
            "ok": self.ok,
            "error": self.error,
            "total_ops": self.total_ops,
            "rows": self.rows,
        }


@dataclass
class BenchReport:
    use_case: int
    context_kind: str
    cells: List[BenchCell]
    partial: bool
    linearity: List[Dict]

    def as_dict(self) -> Dict:
        return {
            "use_case": self.use_case,
            "context": self.context_kind,
            "partial": self.partial,
            "cells": [cell.as_dict() for cell in self.cells],
            "linearity": self.linearity,
            "timing_disclaimer": TIMING_DISCLAIMER,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.as_dict(), indent=indent)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for cell in self.cells:
            if not cell.ok:
                continue
            for row in cell.rows:
                writer.writerow(row)
        return buffer.getvalue()


def _phase_rows(run: DetectionRun, days: int, buckets: int, use_case: int) -> List[Dict]:
    rows = []
    for phase in run.phases:
        counts = phase.op_counts.as_dict()
        if use_case == 2:
            size_phase = (
                PHASE_HISTOGRAM if phase.name == "histogram_build" else PHASE_DETECTION
            )
            phase_label = phase.name
        else:
            size_phase = PHASE_DETECTION
            phase_label = "combined" if use_case == 3 else phase.name
        row = {
            "days": days,
            "buckets": buckets,
            "phase": phase_label,
            "total_operations": phase.op_counts.total(),
            "clear_input_size_bytes": clear_input_size(days, buckets, size_phase),
            "setup_seconds": round(phase.setup_seconds, 6),
            "keygen_seconds": round(phase.keygen_seconds, 6),
            "execution_seconds": round(phase.execution_seconds, 6),
        }
        for counter_name, column in _COUNTER_TO_COLUMN.items():
            row[column] = counts[counter_name]
        rows.append(row)
    if use_case == 3:
        # One fused circuit: merge the phase snapshots into a single row.
        merged = dict(rows[0])
        for row in rows[1:]:
            for column in list(_COUNTER_TO_COLUMN.values()) + ["total_operations"]:
                merged[column] += row[column]
            merged["execution_seconds"] = round(
                merged["execution_seconds"] + row["execution_seconds"], 6
            )
        rows = [merged]
    return rows


def _run_cell(days: int, buckets: int, use_case: int, cfg: DetectorConfig, seed: int) -> DetectionRun:
    reference = synthetic_reference_days(n_days=days, seed=seed)
    data_days = synthetic_reference_days(n_days=days, seed=seed + 1000)
    data = np.concatenate([day.values for day in data_days])
    if use_case == 1:
        layout = cfg.layout()
        oracle = make_context("plain")
        ref_day = build_reference(reference) if days > 1 else reference[0].values
        samples = clamp_for_layout(ref_day, layout)
        hist = Histogram.from_counts(
            layout, build_histogram(samples, layout, oracle).counts
        )
        return run_uc1(hist, data, cfg)
    if use_case == 2:
        return run_uc2(reference, data, cfg)
    if use_case == 3:
        return run_uc3(reference, data, cfg)
    raise ConfigurationError(f"unknown use case {use_case}; expected 1, 2, or 3")


def run_bench(
    grid: Sequence[Tuple[int, int]],
    use_case: int = 3,
    context_kind: str = "simulated",
    seed: int = 7,
    threshold: int = 2,
    value_min: int = 0,
    value_max: int = 100,
    keystore_path: Optional[str] = None,
) -> BenchReport:
    """Execute every (days, buckets) cell and assemble the report.

    Invalid cells (e.g. a bucket count that does not divide the value
    range) are skipped with a diagnostic and flag the report as partial.
    """
    if use_case not in (1, 2, 3):
        raise ConfigurationError(f"unknown use case {use_case}; expected 1, 2, or 3")
    cells: List[BenchCell] = []
    partial = False
    for days, buckets in grid:
        cell = BenchCell(days=days, buckets=buckets, ok=True)
        try:
            check_positive_int(days, "days")
            layout_for_buckets(value_min, value_max, buckets)  # validate early
            cfg = DetectorConfig(
                num_buckets=buckets,
                threshold=threshold,
                value_min=value_min,
                value_max=value_max,
                context=ContextConfig(kind=context_kind, rng_seed=seed),
                keystore_path=keystore_path,
            )
            run = _run_cell(days, buckets, use_case, cfg, seed)
            cell.rows = _phase_rows(run, days, buckets, use_case)
            cell.total_ops = run.total_counts().total()
        except HegramError as exc:
            cell.ok = False
            cell.error = str(exc)
            partial = True
        cells.append(cell)
    return BenchReport(
        use_case=use_case,
        context_kind=context_kind,
        cells=cells,
        partial=partial,
        linearity=_linearity_ratios(cells),
    )


def _linearity_ratios(cells: Sequence[BenchCell]) -> List[Dict]:
    """Total-operation ratios between cells where one axis doubles."""
    by_key = {(c.days, c.buckets): c for c in cells if c.ok and c.total_ops > 0}
    ratios = []
    for (days, buckets), cell in sorted(by_key.items()):
        doubled_days = by_key.get((2 * days, buckets))
        if doubled_days:
            ratios.append(
                {
                    "axis": "days",
                    "from": [days, buckets],
                    "to": [2 * days, buckets],
                    "total_ops_ratio": doubled_days.total_ops / cell.total_ops,
                }
            )
        doubled_buckets = by_key.get((days, 2 * buckets))
        if doubled_buckets:
            ratios.append(
                {
                    "axis": "buckets",
                    "from": [days, buckets],
                    "to": [days, 2 * buckets],
                    "total_ops_ratio": doubled_buckets.total_ops / cell.total_ops,
                }
            )
    return ratios
