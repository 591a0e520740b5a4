"""Seeded synthetic anomaly injectors and the canonical fixture suite.

Five failure modes seen in deployed sensor fleets are reproduced as
deterministic mutations of a 24-hour reference profile:

* ``mismatch``     -- a few readings from a regime the reference never saw
* ``spikes``       -- sudden large in-range excursions
* ``constant``     -- a stuck sensor reporting one value all day
* ``noisy``        -- wideband noise on most readings
* ``out_of_range`` -- excursions beyond the top of the scaled domain
                      (values above 100 that downstream clamping folds
                      into the top bucket)

Ground truth marks the mutated positions.  A mutation counts as a true
anomaly even when the mutated value happens to land in a well-populated
bucket -- that is precisely how the detector's misses are measured.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from .exceptions import ConfigurationError, CsvParseError, DimensionError
from .pipeline import HOURS_PER_DAY, ScaledSeries, build_reference, scale
from .validation import as_int_array

KIND_MISMATCH = "mismatch"
KIND_SPIKES = "spikes"
KIND_CONSTANT = "constant"
KIND_NOISY = "noisy"
KIND_OUT_OF_RANGE = "out_of_range"

SCENARIO_KINDS = (
    KIND_MISMATCH,
    KIND_SPIKES,
    KIND_CONSTANT,
    KIND_NOISY,
    KIND_OUT_OF_RANGE,
)

# Scenario letters, in the canonical suite order.
SCENARIO_LETTERS = {
    "a": KIND_MISMATCH,
    "b": KIND_SPIKES,
    "c": KIND_CONSTANT,
    "d": KIND_NOISY,
    "e": KIND_OUT_OF_RANGE,
}

_DEFAULT_COUNTS = {
    KIND_MISMATCH: 3,
    KIND_SPIKES: 12,
    KIND_NOISY: 22,
    KIND_OUT_OF_RANGE: 13,
}

_SUITE_SEEDS = {
    KIND_MISMATCH: 101,
    KIND_SPIKES: 102,
    KIND_CONSTANT: 103,
    KIND_NOISY: 104,
    KIND_OUT_OF_RANGE: 105,
}

_DOMAIN_MAX = 255  # 8-bit plaintext bound; pre-clamp values must fit


@dataclass(frozen=True)
class ScenarioSpec:
    """Deterministic description of one injected-anomaly scenario."""

    kind: str
    seed: int = 0
    count: Optional[int] = None  # injected positions; None = kind default
    spike_magnitude: int = 30
    noise_amplitude: int = 15
    constant_level: int = 2
    overshoot: int = 30  # how far above 100 out-of-range points may go

    def __post_init__(self):
        if self.kind not in SCENARIO_KINDS:
            raise ConfigurationError(
                f"unknown scenario kind {self.kind!r}; expected one of {SCENARIO_KINDS}"
            )
        if self.count is not None and self.count < 0:
            raise ConfigurationError(f"count must be >= 0, got {self.count}")
        if not 0 <= self.constant_level <= _DOMAIN_MAX:
            raise ConfigurationError(
                f"constant_level {self.constant_level} outside [0, {_DOMAIN_MAX}]"
            )
        if self.kind == KIND_SPIKES and self.spike_magnitude <= 0:
            raise ConfigurationError("spike_magnitude must be > 0")
        if self.kind == KIND_NOISY and self.noise_amplitude <= 0:
            raise ConfigurationError("noise_amplitude must be > 0")
        if self.kind == KIND_OUT_OF_RANGE:
            if self.overshoot < 1:
                raise ConfigurationError("overshoot must be >= 1")
            if 100 + self.overshoot > _DOMAIN_MAX:
                raise ConfigurationError(
                    f"overshoot {self.overshoot} pushes values past {_DOMAIN_MAX}"
                )

    def resolved_count(self, length: int) -> int:
        if self.kind == KIND_CONSTANT:
            return length
        count = _DEFAULT_COUNTS[self.kind] if self.count is None else self.count
        if count > length:
            raise ConfigurationError(
                f"cannot inject {count} points into a {length}-sample day"
            )
        return count


@dataclass(frozen=True)
class LabeledFixture:
    """A mutated day plus the ground-truth positions of the mutations.

    ``data`` may exceed 100 for the out-of-range scenario; downstream
    clamping folds such values into the top bucket.
    """

    kind: str
    data: np.ndarray
    truth: np.ndarray

    def __post_init__(self):
        if len(self.data) != len(self.truth):
            raise DimensionError("fixture data and truth must be index-aligned")

    @property
    def true_anomalies(self) -> int:
        return int(self.truth.sum())


def inject(base, spec: ScenarioSpec) -> LabeledFixture:
    """Apply one scenario to a reference profile, deterministically.

    The same (base, spec) pair always yields the same fixture; the seed
    drives both position choice and mutation magnitudes.
    """
    base_arr = as_int_array(base.values if isinstance(base, ScaledSeries) else base, "base")
    n = len(base_arr)
    if n == 0:
        raise DimensionError("base profile is empty")
    count = spec.resolved_count(n)
    rng = np.random.default_rng(spec.seed)
    data = base_arr.copy()
    truth = np.zeros(n, dtype=np.int64)

    if count == 0:
        return LabeledFixture(kind=spec.kind, data=data, truth=truth)

    if spec.kind == KIND_CONSTANT:
        data[:] = spec.constant_level
        truth[:] = 1
        return LabeledFixture(kind=spec.kind, data=data, truth=truth)

    positions = np.sort(rng.choice(n, size=count, replace=False))
    truth[positions] = 1

    if spec.kind == KIND_MISMATCH:
        # Readings from a regime the reference never produced: values
        # outside the base profile's envelope but inside the domain.
        # (The detector is time-blind, so "not matching" is a statement
        # about value ranges, not about when the reading occurred.)
        lo, hi = int(base_arr.min()), int(base_arr.max())
        pool = np.concatenate([np.arange(0, lo), np.arange(hi + 1, 101)])
        if len(pool) == 0:
            raise ConfigurationError(
                "mismatch scenario impossible: the base profile already "
                "spans the whole [0, 100] domain"
            )
        data[positions] = rng.choice(pool, size=count)
    elif spec.kind == KIND_SPIKES:
        signs = rng.choice((-1, 1), size=count)
        data[positions] = np.clip(
            data[positions] + signs * spec.spike_magnitude, 0, 100
        )
    elif spec.kind == KIND_NOISY:
        amp = spec.noise_amplitude
        # Draw nonzero offsets so every marked position really mutates.
        offsets = rng.integers(1, amp + 1, size=count) * rng.choice((-1, 1), size=count)
        data[positions] = np.clip(data[positions] + offsets, 0, 100)
    elif spec.kind == KIND_OUT_OF_RANGE:
        data[positions] = 101 + rng.integers(0, spec.overshoot, size=count)

    return LabeledFixture(kind=spec.kind, data=data, truth=truth)


# -- canonical reference data and suite ------------------------------------


def synthetic_day_kw(seed: int, peak_kw: float = 9.91) -> np.ndarray:
    """One plausible production day in kW: low mornings, a midday peak.

    The scaled profile stays inside [12, 88] so the outermost buckets of
    a 10-bucket layout are guaranteed empty -- the precondition for the
    constant and out-of-range scenarios to be structurally detectable.
    """
    rng = np.random.default_rng(seed)
    hours = np.arange(HOURS_PER_DAY)
    curve = 50 + 38 * np.sin(np.pi * (hours - 6) / 12)
    jitter = rng.integers(-2, 3, size=HOURS_PER_DAY)
    scaled = np.clip(np.rint(curve) + jitter, 12, 88)
    return scaled / 100.0 * peak_kw


def synthetic_reference_days(n_days: int = 5, seed: int = 7, peak_kw: float = 9.91) -> List[ScaledSeries]:
    """Several consecutive synthetic days, already scaled to [0, 100]."""
    return [
        scale(synthetic_day_kw(seed + i, peak_kw), 0.0, peak_kw)
        for i in range(n_days)
    ]


def canonical_reference(seed: int = 7) -> np.ndarray:
    """The 24-hour reference profile behind the canonical fixture suite."""
    return build_reference(synthetic_reference_days(seed=seed))


def fixture_suite(seed: int = 7) -> Dict[str, LabeledFixture]:
    """One canonical fixture per scenario, keyed by letter a..e.

    Seeds are fixed so the suite always reproduces the golden files
    checked into ``fixtures/``.
    """
    base = canonical_reference(seed=seed)
    suite = {}
    for letter, kind in SCENARIO_LETTERS.items():
        suite[letter] = inject(base, ScenarioSpec(kind=kind, seed=_SUITE_SEEDS[kind]))
    return suite


# -- fixture CSV round trip ---------------------------------------------------


def write_fixture_csv(fixture: LabeledFixture, path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["hour_index", "scaled_value", "truth_label"])
        for i, (value, label) in enumerate(zip(fixture.data, fixture.truth)):
            writer.writerow([i, int(value), int(label)])


def read_fixture_csv(path, kind: str = "unknown") -> LabeledFixture:
    path = Path(path)
    data, truth = [], []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0] == "hour_index":
                continue
            try:
                data.append(int(row[1]))
                truth.append(int(row[2]))
            except (IndexError, ValueError):
                raise CsvParseError("expected hour_index,scaled_value,truth_label", lineno) from None
    return LabeledFixture(
        kind=kind,
        data=np.array(data, dtype=np.int64),
        truth=np.array(truth, dtype=np.int64),
    )


def write_scaled_csv(values: Sequence[int], path) -> None:
    """Write a scaled series as ``hour_index,scaled_value``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["hour_index", "scaled_value"])
        for i, value in enumerate(values):
            writer.writerow([i, int(value)])


def read_scaled_csv(path) -> np.ndarray:
    """Read ``hour_index,scaled_value`` CSVs; extra columns are ignored."""
    path = Path(path)
    values = []
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if not row or row[0] == "hour_index":
                continue
            try:
                values.append(int(row[1]))
            except (IndexError, ValueError):
                raise CsvParseError("expected hour_index,scaled_value", lineno) from None
    return np.array(values, dtype=np.int64)
