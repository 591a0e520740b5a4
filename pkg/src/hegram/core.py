"""Vectorized bucket-membership, histogram, and threshold-labeling kernels.

Encrypted backends forbid data-dependent control flow: a value cannot be
compared, branched on, or used as a loop bound while encrypted.  Every
operation here is therefore expressed as a fixed-shape map/reduce over
the two primitives such backends do provide -- element addition and
total 8-bit table lookup -- with explicit noise refreshes where running
values accumulate.  The same code path executes on the plain oracle
context, where those primitives are ordinary integer operations, so the
plain results certify the encrypted ones.

Scalar reference predicates (`is_in_bucket`, `is_in_abnormal_bucket`)
are kept alongside: they define the semantics the lookup tables encode.
"""

from __future__ import annotations

from functools import lru_cache
from typing import List, Sequence, Tuple

from .buckets import BucketLayout, Histogram
from .contexts.base import EvalContext, PLAINTEXT_MAX, TABLE_SIZE
from .exceptions import ConfigurationError, DimensionError
from .validation import check_nonnegative_int

__all__ = [
    "is_in_bucket",
    "is_in_abnormal_bucket",
    "in_bucket_table",
    "below_threshold_table",
    "BOTH_CONDITIONS_TABLE",
    "vectorial_is_in_bucket",
    "vector_add",
    "build_histogram",
    "vectorial_is_in_abnormal_bucket",
    "reduce_sum",
    "label_samples",
    "tables_for_layout",
]


# -- scalar reference predicates -------------------------------------------


def is_in_bucket(x: int, low: int, high: int) -> int:
    """1 iff ``low <= x < high``; total over all integers."""
    return 1 if low <= x < high else 0


def is_in_abnormal_bucket(x: int, low: int, high: int, count: int, threshold: int) -> int:
    """1 iff ``x`` falls in ``[low, high)`` AND the bucket is rare.

    Rare means its occupancy ``count`` is strictly below ``threshold``.
    A value outside the bucket is never abnormal for that bucket,
    whatever the count.
    """
    return 1 if (low <= x < high and count < threshold) else 0


# -- lookup tables ------------------------------------------------------------


@lru_cache(maxsize=None)
def in_bucket_table(low: int, high: int) -> Tuple[int, ...]:
    """Total 8-bit table realising the [low, high) membership test."""
    return tuple(is_in_bucket(v, low, high) for v in range(TABLE_SIZE))


@lru_cache(maxsize=None)
def below_threshold_table(threshold: int) -> Tuple[int, ...]:
    """Total 8-bit table realising ``value < threshold``."""
    return tuple(1 if v < threshold else 0 for v in range(TABLE_SIZE))


# Two membership bits are combined by adding them and testing for 2;
# multiplication stays off the substrate entirely.
BOTH_CONDITIONS_TABLE: Tuple[int, ...] = tuple(
    1 if v == 2 else 0 for v in range(TABLE_SIZE)
)


def tables_for_layout(layout: BucketLayout, threshold: int | None = None):
    """Every lookup table a run over ``layout`` will evaluate."""
    tables = [in_bucket_table(low, high) for low, high in layout]
    if threshold is not None:
        tables.append(below_threshold_table(threshold))
        tables.append(BOTH_CONDITIONS_TABLE)
    return tables


# -- vectorized operations -----------------------------------------------------


def vectorial_is_in_bucket(x, layout: BucketLayout, ctx: EvalContext) -> List:
    """Membership bit of ``x`` against every bucket of ``layout``.

    For a value inside the layout's range the result is one-hot; for a
    value outside it the result is all zeros (no bucket matches).  Each
    bit costs exactly one table lookup on metered backends.
    """
    x_val = ctx.ingest(x)
    return [ctx.lut_eval(x_val, in_bucket_table(low, high)) for low, high in layout]


def vector_add(u: Sequence, v: Sequence, ctx: EvalContext) -> List:
    """Element-wise sum of two equal-length vectors."""
    if len(u) != len(v):
        raise DimensionError(
            f"cannot add vectors of length {len(u)} and {len(v)}"
        )
    return [ctx.add(ctx.ingest(a), ctx.ingest(b)) for a, b in zip(u, v)]


def build_histogram(data: Sequence, layout: BucketLayout, ctx: EvalContext) -> Histogram:
    """Accumulate per-bucket occupancy counts over ``data``.

    Samples must already be clamped into ``[layout.value_min,
    layout.value_max - 1]``; see ``pipeline.clamp_for_layout``.  An
    unclamped out-of-range sample simply lands in no bucket.

    The running counts are refreshed once per sample so that they enter
    every addition with a full noise budget; the refresh cadence must
    not depend on the sample count, otherwise the metered cost of
    processing 2n samples would not be exactly twice that of n.
    """
    data = list(data)
    if len(data) > PLAINTEXT_MAX:
        raise ConfigurationError(
            f"cannot count {len(data)} samples in an {PLAINTEXT_MAX + 1}-value "
            "domain; split the input"
        )
    counts = [ctx.trivial(0) for _ in layout]
    for x in data:
        hits = vectorial_is_in_bucket(x, layout, ctx)
        counts = vector_add(counts, hits, ctx)
        counts = [ctx.bootstrap(c) for c in counts]
    return Histogram(layout=layout, counts=counts)


def vectorial_is_in_abnormal_bucket(
    x,
    layout: BucketLayout,
    counts: Sequence,
    threshold: int,
    ctx: EvalContext,
) -> List:
    """Per-bucket abnormality bits for one sample.

    Bit i is 1 iff ``x`` falls in bucket i and that bucket's occupancy
    is strictly below ``threshold``; at most one bit is set.  Realised
    per bucket as two lookups (range test, rarity test), one addition,
    and a final lookup that keeps the bit only when both tests passed.
    """
    if len(counts) != len(layout):
        raise DimensionError(
            f"{len(counts)} counts for {len(layout)} buckets"
        )
    check_nonnegative_int(threshold, "threshold")
    x_val = ctx.ingest(x)
    rare_table = below_threshold_table(threshold)
    bits = []
    for (low, high), count in zip(layout, counts):
        in_range = ctx.lut_eval(x_val, in_bucket_table(low, high))
        rare = ctx.lut_eval(ctx.ingest(count), rare_table)
        both = ctx.add(in_range, rare)
        bits.append(ctx.lut_eval(both, BOTH_CONDITIONS_TABLE))
    return bits


def reduce_sum(values: Sequence, ctx: EvalContext):
    """Left-fold sum of a vector; an empty vector sums to 0.

    Running totals are refreshed whenever their noise budget runs out,
    so the fold is safe for any vector length.  The refresh points
    depend only on the vector length and the configured budget, never
    on the data.
    """
    vals = [ctx.ingest(v) for v in values]
    if not vals:
        return ctx.trivial(0)
    acc = vals[0]
    for v in vals[1:]:
        if ctx.noise_budget_of(acc) == 0:
            acc = ctx.bootstrap(acc)
        if ctx.noise_budget_of(v) == 0:
            v = ctx.bootstrap(v)
        acc = ctx.add(acc, v)
    return acc


def label_samples(data: Sequence, hist: Histogram, threshold: int, ctx: EvalContext) -> List:
    """Binary anomaly label for every sample, index-aligned with ``data``.

    A sample labels 1 exactly when it falls into a bucket whose
    reference occupancy is strictly below ``threshold``: the at-most-
    one-hot abnormality vector is folded into a single 0/1 value.
    """
    return [
        reduce_sum(
            vectorial_is_in_abnormal_bucket(x, hist.layout, hist.counts, threshold, ctx),
            ctx,
        )
        for x in data
    ]
