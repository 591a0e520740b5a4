"""hegram: equi-width histogram anomaly detection for integer sensor
streams, runnable unchanged on plain data or on (simulated)
homomorphically encrypted data, with operation-count accounting."""

from .buckets import BucketLayout, Histogram, layout_for_buckets, make_layout
from .contexts import (
    ContextConfig,
    EvalContext,
    KeyPair,
    OpCounter,
    PlainContext,
    SimulatedContext,
    make_context,
    native_available,
)
from .core import (
    build_histogram,
    is_in_abnormal_bucket,
    is_in_bucket,
    label_samples,
    reduce_sum,
    vector_add,
    vectorial_is_in_abnormal_bucket,
    vectorial_is_in_bucket,
)
from .detector import DetectorConfig, DetectionRun, run_uc1, run_uc2, run_uc3
from .estimator import HistogramAnomalyDetector
from .bench import clear_input_size, run_bench
from .pipeline import (
    MeasurementSeries,
    ScaledSeries,
    build_reference,
    clamp_for_layout,
    load_csv,
    scale,
)
from .scenarios import LabeledFixture, ScenarioSpec, fixture_suite, inject

__version__ = "0.1.0"

__all__ = [
    "BucketLayout",
    "ContextConfig",
    "DetectionRun",
    "DetectorConfig",
    "EvalContext",
    "Histogram",
    "HistogramAnomalyDetector",
    "KeyPair",
    "LabeledFixture",
    "MeasurementSeries",
    "OpCounter",
    "PlainContext",
    "ScaledSeries",
    "ScenarioSpec",
    "SimulatedContext",
    "build_histogram",
    "build_reference",
    "clamp_for_layout",
    "clear_input_size",
    "fixture_suite",
    "inject",
    "is_in_abnormal_bucket",
    "is_in_bucket",
    "label_samples",
    "layout_for_buckets",
    "load_csv",
    "make_context",
    "make_layout",
    "native_available",
    "reduce_sum",
    "run_bench",
    "run_uc1",
    "run_uc2",
    "run_uc3",
    "scale",
    "vector_add",
    "vectorial_is_in_abnormal_bucket",
    "vectorial_is_in_bucket",
]
