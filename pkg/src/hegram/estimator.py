"""scikit-learn style estimator around the histogram detector.

``fit`` learns the reference occupancy histogram; ``predict`` returns a
binary label per sample, 1 marking an anomaly (the convention outlier
libraries such as PyOD use).  The estimator honours ``get_params`` /
``set_params`` and ``clone``, so it slots into pipelines and searches.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .buckets import Histogram, layout_for_buckets
from .contexts import ContextConfig, make_context
from .core import build_histogram, label_samples, tables_for_layout
from .exceptions import ConfigurationError
from .pipeline import clamp_for_layout
from .validation import as_int_array, check_nonnegative_int


class HistogramAnomalyDetector(BaseEstimator):
    """Flag integer readings that land in rarely-occupied value buckets.

    The value range ``[value_min, value_max)`` is split into
    ``num_buckets`` equal-width buckets.  ``fit`` counts how often
    reference data occupies each bucket; ``predict`` labels a sample as
    anomalous (1) when its bucket's reference count is strictly below
    ``threshold``.  Out-of-range samples are clamped into the edge
    buckets first, so over-range spikes surface in the top bucket.

    With ``context="simulated"`` both phases run through the encrypted-
    execution simulation and decrypt to the same labels the plain
    context produces -- useful for exercising or costing the encrypted
    path without changing calling code.

    Parameters
    ----------
    num_buckets : int, default=10
        Number of equal-width buckets; must divide ``value_max - value_min``.
    threshold : int, default=2
        A bucket is "rare" when its reference count is strictly below this.
    value_min, value_max : int, default=(0, 100)
        Bounds of the scaled integer domain.
    context : str or ContextConfig, default="plain"
        Evaluation backend: ``"plain"``, ``"simulated"``, ``"native"``,
        or a full :class:`~hegram.contexts.ContextConfig`.

    Attributes
    ----------
    layout_ : BucketLayout
        The fitted bucket layout.
    histogram_ : ndarray of shape (num_buckets,)
        Reference occupancy counts (decrypted when fitted encrypted).
    n_reference_samples_ : int
        Number of samples the histogram was built from.

    Examples
    --------
    >>> det = HistogramAnomalyDetector(num_buckets=10, threshold=2)
    >>> det.fit([15, 15, 15, 42, 42, 42]).predict([15, 88])
    array([0, 1])
    """

    def __init__(
        self,
        num_buckets: int = 10,
        threshold: int = 2,
        value_min: int = 0,
        value_max: int = 100,
        context="plain",
    ):
        self.num_buckets = num_buckets
        self.threshold = threshold
        self.value_min = value_min
        self.value_max = value_max
        self.context = context

    def _context_config(self) -> ContextConfig:
        if isinstance(self.context, ContextConfig):
            return self.context
        if isinstance(self.context, str):
            return ContextConfig(kind=self.context)
        raise ConfigurationError(
            f"context must be a kind string or ContextConfig, got {type(self.context).__name__}"
        )

    def fit(self, X, y=None):
        """Build the reference histogram from ``X``.

        Parameters
        ----------
        X : array-like
            Reference readings, as a flat sequence or a (days, 24) array;
            multi-day input is flattened.
        y : ignored
            Present for scikit-learn API compatibility.

        Returns
        -------
        self
        """
        check_nonnegative_int(self.threshold, "threshold")
        layout = layout_for_buckets(self.value_min, self.value_max, self.num_buckets)
        values = clamp_for_layout(as_int_array(X, "X"), layout)
        ctx = make_context(self._context_config())
        ctx.prepare_tables(tables_for_layout(layout))
        ctx.keygen()
        hist = build_histogram(values, layout, ctx)
        self.layout_ = layout
        self.histogram_ = hist.decrypt(ctx)
        self.n_reference_samples_ = int(len(values))
        return self

    def predict(self, X) -> np.ndarray:
        """Label each sample: 1 = anomalous, 0 = normal."""
        check_is_fitted(self, "histogram_")
        values = clamp_for_layout(as_int_array(X, "X"), self.layout_)
        ctx = make_context(self._context_config())
        ctx.prepare_tables(tables_for_layout(self.layout_, self.threshold))
        ctx.keygen()
        counts = [ctx.ingest(int(c)) for c in self.histogram_]
        hist = Histogram(layout=self.layout_, counts=counts)
        labels = label_samples(values, hist, self.threshold, ctx)
        return np.array([ctx.decrypt(v) for v in labels], dtype=np.int64)

    def fit_predict(self, X, y=None) -> np.ndarray:
        """Fit on ``X`` and label the same samples."""
        return self.fit(X, y).predict(X)
