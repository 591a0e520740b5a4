"""Input validation helpers used by the public entry points.

These mirror the spirit of scikit-learn's ``check_array``: normalise
user-facing inputs to predictable numpy types early, and fail with a
message that names the offending argument.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .exceptions import ConfigurationError, DimensionError, DomainError

PLAINTEXT_BITS = 8
PLAINTEXT_MAX = (1 << PLAINTEXT_BITS) - 1


def as_int_array(values, name: str = "values") -> np.ndarray:
    """Coerce ``values`` to a 1-D int64 array, rejecting non-integral input."""
    arr = np.asarray(values)
    if arr.ndim == 0:
        raise DimensionError(f"{name} must be a sequence, got a scalar")
    if arr.ndim > 1:
        arr = arr.reshape(-1)
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.all(np.isfinite(arr)) or not np.allclose(arr, rounded):
            raise DomainError(f"{name} must contain integers, got dtype {arr.dtype}")
        arr = rounded
    return arr.astype(np.int64)


def check_plaintext_domain(values, name: str = "values") -> np.ndarray:
    """Validate that every value fits the 8-bit plaintext domain [0, 255]."""
    arr = as_int_array(values, name)
    if arr.size and (arr.min() < 0 or arr.max() > PLAINTEXT_MAX):
        bad = arr[(arr < 0) | (arr > PLAINTEXT_MAX)][0]
        raise DomainError(
            f"{name} must lie in [0, {PLAINTEXT_MAX}], got {int(bad)}"
        )
    return arr


def check_equal_length(u: Sequence, v: Sequence, what: str = "vectors") -> None:
    if len(u) != len(v):
        raise DimensionError(
            f"{what} must have equal length, got {len(u)} and {len(v)}"
        )


def check_nonnegative_int(value, name: str) -> int:
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ConfigurationError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ConfigurationError(f"{name} must be >= 0, got {value}")
    return int(value)


def check_positive_int(value, name: str) -> int:
    checked = check_nonnegative_int(value, name)
    if checked == 0:
        raise ConfigurationError(f"{name} must be >= 1, got 0")
    return checked
