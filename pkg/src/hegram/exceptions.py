"""Exception types shared across the package."""


class HegramError(Exception):
    """Base class for every error raised by this package."""


class ConfigurationError(HegramError):
    """A configuration value (layout, scenario, use case) is inconsistent."""


class DimensionError(HegramError):
    """Two vectors that must be index-aligned have different lengths."""


class DomainError(HegramError):
    """A plaintext value is outside the supported 8-bit integer domain."""


class ScaleRangeError(HegramError):
    """A measurement falls outside the scaling bounds and clamping is off."""


class NoiseBudgetError(HegramError):
    """A ciphertext's noise budget is exhausted and no bootstrap was applied."""


class IntegrityError(HegramError):
    """A ciphertext was used with a key it does not belong to."""


class CapabilityError(HegramError):
    """A requested backend is not available in this build."""


class KeyStoreError(HegramError):
    """Key material is missing from or malformed in the on-disk key store."""


class CsvParseError(HegramError):
    """A CSV row could not be parsed.  Carries the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ContinuityError(HegramError):
    """A time series has a gap, a duplicate timestamp, or non-hourly spacing."""
