import json

import numpy as np
import pytest

from hegram.exceptions import ConfigurationError, DimensionError
from hegram.scenarios import (
    SCENARIO_LETTERS,
    LabeledFixture,
    ScenarioSpec,
    canonical_reference,
    fixture_suite,
    inject,
    read_fixture_csv,
    read_scaled_csv,
    synthetic_reference_days,
)
from hegram.pipeline import build_reference, split_days


@pytest.fixture(scope="module")
def base():
    return canonical_reference()


def test_inject_is_deterministic(base):
    spec = ScenarioSpec(kind="noisy", seed=99, noise_amplitude=15)
    a = inject(base, spec)
    b = inject(base, spec)
    assert (a.data == b.data).all()
    assert (a.truth == b.truth).all()
    different = inject(base, ScenarioSpec(kind="noisy", seed=100, noise_amplitude=15))
    assert not (a.data == different.data).all()


def test_inject_zero_points_is_identity(base):
    fixture = inject(base, ScenarioSpec(kind="spikes", seed=4, count=0))
    assert (fixture.data == base).all()
    assert fixture.truth.sum() == 0


def test_constant_marks_every_position(base):
    fixture = inject(base, ScenarioSpec(kind="constant", seed=0, constant_level=2))
    assert (fixture.data == 2).all()
    assert fixture.truth.sum() == len(base) == 24


def test_truth_count_matches_configured_injection_count(base):
    for kind in ("mismatch", "spikes", "noisy", "out_of_range"):
        fixture = inject(base, ScenarioSpec(kind=kind, seed=8, count=5))
        assert fixture.true_anomalies == 5
        mutated = fixture.data != base
        # every marked position genuinely mutated
        assert (fixture.truth[mutated] == 1).all()
        assert mutated.sum() == 5


def test_out_of_range_points_exceed_the_scaled_domain(base):
    fixture = inject(base, ScenarioSpec(kind="out_of_range", seed=5))
    injected = fixture.data[fixture.truth == 1]
    assert (injected > 100).all()
    assert (injected <= 255).all()


def test_impossible_parameters_are_spec_errors(base):
    with pytest.raises(ConfigurationError):
        ScenarioSpec(kind="warp")
    with pytest.raises(ConfigurationError):
        ScenarioSpec(kind="constant", constant_level=300)
    with pytest.raises(ConfigurationError):
        ScenarioSpec(kind="noisy", noise_amplitude=0)
    with pytest.raises(ConfigurationError):
        ScenarioSpec(kind="out_of_range", overshoot=200)
    with pytest.raises(ConfigurationError):
        inject(base, ScenarioSpec(kind="spikes", count=25))
    with pytest.raises(ConfigurationError):
        full_span = np.concatenate([[0, 100], np.full(22, 50)])
        inject(full_span, ScenarioSpec(kind="mismatch"))  # no unseen values left
    with pytest.raises(DimensionError):
        inject([], ScenarioSpec(kind="spikes"))


def test_fixture_suite_shape():
    suite = fixture_suite()
    assert len(suite) == 5
    assert set(suite) == set(SCENARIO_LETTERS)
    for letter, fixture in suite.items():
        assert fixture.kind == SCENARIO_LETTERS[letter]
        assert len(fixture.data) == 24
    assert suite["c"].true_anomalies == 24


def test_suite_matches_checked_in_goldens(fixtures_dir):
    suite = fixture_suite()
    for letter, fixture in suite.items():
        golden = read_fixture_csv(fixtures_dir / f"scenario_{letter}.csv", kind=fixture.kind)
        assert (golden.data == fixture.data).all(), letter
        assert (golden.truth == fixture.truth).all(), letter


def test_reference_days_golden_reproduces(fixtures_dir):
    days = synthetic_reference_days()
    flat = np.concatenate([d.values for d in days])
    golden = read_scaled_csv(fixtures_dir / "reference_days.csv")
    assert (golden == flat).all()
    # and the derived profile matches the canonical one
    assert (build_reference(split_days(golden)) == canonical_reference()).all()


def test_golden_detection_counts_frozen(fixtures_dir):
    golden = json.loads((fixtures_dir / "expected_detections.json").read_text())
    assert golden["scenarios"]["c"]["detected"] == 24
    for letter, entry in golden["scenarios"].items():
        assert entry["true_anomalies"] + entry["normal_samples"] == 24


def test_labeled_fixture_alignment():
    with pytest.raises(Exception):
        LabeledFixture(kind="spikes", data=np.zeros(3), truth=np.zeros(2))
