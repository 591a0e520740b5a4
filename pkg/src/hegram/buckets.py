"""Equal-width bucket layouts and the histograms built over them.

A layout is the x-axis of an equi-width histogram: contiguous half-open
ranges ``[low, high)`` that all share one width.  A histogram pairs a
layout with one occupancy count per bucket; in encrypted pipelines the
counts are ciphertext handles rather than plain integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, List, Tuple

import numpy as np

from .exceptions import ConfigurationError, DimensionError
from .validation import check_positive_int


@dataclass(frozen=True)
class BucketLayout:
    """Contiguous equal-width bucket ranges.

    Attributes
    ----------
    lows, highs : tuple of int
        Inclusive lower and exclusive upper bound of each bucket,
        index-aligned.  ``highs[i] == lows[i + 1]`` for interior buckets.
    width : int
        The shared bucket width, ``highs[i] - lows[i]`` for every i.
    """

    lows: Tuple[int, ...]
    highs: Tuple[int, ...]
    width: int

    def __post_init__(self):
        if len(self.lows) != len(self.highs) or not self.lows:
            raise ConfigurationError("layout needs >= 1 aligned (low, high) pair")
        if self.width <= 0:
            raise ConfigurationError(f"bucket width must be > 0, got {self.width}")
        for low, high in zip(self.lows, self.highs):
            if high - low != self.width:
                raise ConfigurationError(
                    f"bucket [{low}, {high}) does not have width {self.width}"
                )
        for i in range(len(self.lows) - 1):
            if self.highs[i] != self.lows[i + 1]:
                raise ConfigurationError(
                    f"buckets {i} and {i + 1} are not contiguous"
                )

    def __len__(self) -> int:
        return len(self.lows)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(zip(self.lows, self.highs))

    @property
    def value_min(self) -> int:
        return self.lows[0]

    @property
    def value_max(self) -> int:
        return self.highs[-1]


def make_layout(value_min: int, value_max: int, bucket_width: int) -> BucketLayout:
    """Build the contiguous equal-width layout covering [value_min, value_max).

    The range length must be an exact multiple of ``bucket_width``;
    a remainder bucket would silently break the equal-width invariant,
    so it is rejected instead.

    >>> make_layout(0, 100, 10).lows
    (0, 10, 20, 30, 40, 50, 60, 70, 80, 90)
    """
    check_positive_int(bucket_width, "bucket_width")
    if value_min >= value_max:
        raise ConfigurationError(
            f"value_min ({value_min}) must be below value_max ({value_max})"
        )
    span = value_max - value_min
    if span % bucket_width != 0:
        raise ConfigurationError(
            f"range [{value_min}, {value_max}) of length {span} is not divisible "
            f"by bucket_width {bucket_width}"
        )
    lows = tuple(range(value_min, value_max, bucket_width))
    highs = tuple(low + bucket_width for low in lows)
    return BucketLayout(lows=lows, highs=highs, width=bucket_width)


def layout_for_buckets(value_min: int, value_max: int, num_buckets: int) -> BucketLayout:
    """Layout with ``num_buckets`` equal buckets over [value_min, value_max)."""
    check_positive_int(num_buckets, "num_buckets")
    span = value_max - value_min
    if span % num_buckets != 0:
        raise ConfigurationError(
            f"num_buckets {num_buckets} does not divide the range length {span}"
        )
    return make_layout(value_min, value_max, span // num_buckets)


@dataclass
class Histogram:
    """A bucket layout plus one occupancy count per bucket.

    ``counts`` holds whatever value type the evaluation context that
    built it works with: plain ints on the oracle context, ciphertext
    handles on encrypted contexts.  ``decrypt`` materialises the plain
    view either way.
    """

    layout: BucketLayout
    counts: List = field(default_factory=list)

    def __post_init__(self):
        if len(self.counts) != len(self.layout):
            raise DimensionError(
                f"histogram has {len(self.counts)} counts for "
                f"{len(self.layout)} buckets"
            )

    def decrypt(self, ctx) -> np.ndarray:
        """Plain per-bucket counts, decrypting through ``ctx`` if needed."""
        return np.array([ctx.decrypt(c) for c in self.counts], dtype=np.int64)

    @classmethod
    def from_counts(cls, layout: BucketLayout, counts) -> "Histogram":
        return cls(layout=layout, counts=[int(c) for c in counts])
