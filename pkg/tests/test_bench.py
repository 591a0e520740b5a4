import csv
import io
import json

import pytest

from hegram.bench import (
    PHASE_DETECTION,
    PHASE_HISTOGRAM,
    clear_input_size,
    run_bench,
)
from hegram.exceptions import ConfigurationError


def test_clear_input_size_examples():
    assert clear_input_size(1, 10, PHASE_DETECTION) == 55
    assert clear_input_size(2, 50, PHASE_DETECTION) == 199
    assert clear_input_size(1, 10, PHASE_HISTOGRAM) == 44


def test_clear_input_size_reference_grid():
    expected_detection = {
        (1, 10): 55,
        (1, 20): 85,
        (1, 50): 175,
        (2, 10): 79,
        (2, 20): 109,
        (2, 50): 199,
    }
    for (days, buckets), size in expected_detection.items():
        assert clear_input_size(days, buckets, PHASE_DETECTION) == size
        assert clear_input_size(days, buckets, PHASE_HISTOGRAM) == 24 * days + 2 * buckets


def test_clear_input_size_validation():
    with pytest.raises(ConfigurationError):
        clear_input_size(0, 10)
    with pytest.raises(ConfigurationError):
        clear_input_size(1, 10, "warmup")


def test_bench_days_doubling_is_exact():
    report = run_bench([(1, 10), (2, 10)], use_case=3)
    ratios = [r for r in report.linearity if r["axis"] == "days"]
    assert len(ratios) == 1
    assert ratios[0]["total_ops_ratio"] == 2.0


def test_bench_bucket_doubling_is_near_linear():
    report = run_bench([(1, 10), (1, 20)], use_case=3)
    ratios = [r for r in report.linearity if r["axis"] == "buckets"]
    assert len(ratios) == 1
    assert 1.85 <= ratios[0]["total_ops_ratio"] <= 2.15


def test_bench_empty_grid():
    report = run_bench([], use_case=3)
    assert report.cells == []
    assert report.partial is False
    assert json.loads(report.to_json())["cells"] == []


def test_bench_invalid_cell_is_skipped_with_diagnostic():
    report = run_bench([(1, 10), (1, 3)], use_case=3)
    assert report.partial is True
    bad = report.cells[1]
    assert bad.ok is False
    assert "3" in bad.error
    good = report.cells[0]
    assert good.ok is True


def test_bench_report_consistency_all_ucs(tmp_path):
    for uc in (1, 2, 3):
        report = run_bench(
            [(1, 10), (1, 20)],
            use_case=uc,
            keystore_path=str(tmp_path / f"uc{uc}"),
        )
        for cell in report.cells:
            assert cell.ok
            category_cols = [
                "programmable_bootstrap",
                "key_switch",
                "clear_add",
                "encrypted_add",
                "clear_multiply",
                "encrypted_negation",
            ]
            for row in cell.rows:
                assert row["total_operations"] == sum(row[c] for c in category_cols)
                phase = (
                    PHASE_HISTOGRAM
                    if row["phase"] == "histogram_build"
                    else PHASE_DETECTION
                )
                assert row["clear_input_size_bytes"] == clear_input_size(
                    cell.days, cell.buckets, phase
                )
                assert row["clear_multiply"] == 0
            assert cell.total_ops == sum(r["total_operations"] for r in cell.rows)


def test_bench_uc2_reports_both_phases(tmp_path):
    report = run_bench([(1, 10)], use_case=2, keystore_path=str(tmp_path))
    rows = report.cells[0].rows
    assert [r["phase"] for r in rows] == ["histogram_build", "anomaly_detection"]


def test_bench_csv_round_trip(tmp_path):
    report = run_bench([(1, 10)], use_case=3, keystore_path=str(tmp_path))
    parsed = list(csv.DictReader(io.StringIO(report.to_csv())))
    assert len(parsed) == 1
    row = parsed[0]
    assert row["days"] == "1"
    assert row["clear_input_size_bytes"] == "55"
    assert int(row["total_operations"]) == report.cells[0].total_ops


def test_bench_deterministic_counts():
    a = run_bench([(1, 10)], use_case=3, seed=7)
    b = run_bench([(1, 10)], use_case=3, seed=7)
    assert a.cells[0].total_ops == b.cells[0].total_ops
    assert a.cells[0].rows[0]["programmable_bootstrap"] == b.cells[0].rows[0]["programmable_bootstrap"]


def test_bench_rejects_unknown_use_case():
    with pytest.raises(ConfigurationError):
        run_bench([(1, 10)], use_case=4)
