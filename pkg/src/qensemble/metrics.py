"""Threshold-based performance scoring: precision, recall, F-measure, F-max.

F-max is the maximum F-measure over all score thresholds.  Because F as a
function of the threshold only changes at observed score values, sweeping
the distinct scores (with the >= classification rule) is exact; under that
rule the lowest observed score already realises the all-positive operating
point, so no extra below-minimum threshold is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedRecallError, ValidationError


@dataclass(frozen=True)
class FMaxResult:
    """Best F-measure over the threshold sweep and its operating point.

    ``fmax`` equals the harmonic mean of ``precision_at_max`` and
    ``recall_at_max``; construction enforces this to 1e-12.
    """

    fmax: float
    argmax_threshold: float
    precision_at_max: float
    recall_at_max: float

    def __post_init__(self):
        p, r = self.precision_at_max, self.recall_at_max
        harmonic = 0.0 if p + r == 0.0 else 2.0 * p * r / (p + r)
        if abs(self.fmax - harmonic) > 1e-12:
            raise ValidationError(
                f"fmax {self.fmax} is not the harmonic mean of "
                f"precision {p} and recall {r}"
            )


def _as_arrays(scores, labels):
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if s.ndim != 1 or y.ndim != 1 or s.shape != y.shape:
        raise ValidationError("scores and labels must be 1-D and equal length")
    if s.size == 0:
        raise ValidationError("empty score vector")
    return s, y


def precision_recall(scores, labels, threshold: float) -> tuple[float, float]:
    """Precision and recall of the rule ``score >= threshold``.

    Precision is 0 by convention when nothing is predicted positive.
    Raises UndefinedRecallError when the labels contain no positives.
    """
    s, y = _as_arrays(scores, labels)
    positives = int(y.sum())
    if positives == 0:
        raise UndefinedRecallError("no positive labels: recall undefined")
    predicted = s >= threshold
    n_pred = int(predicted.sum())
    tp = int(y[predicted].sum())
    precision = tp / n_pred if n_pred > 0 else 0.0
    recall = tp / positives
    return precision, recall


def f_measure(precision: float, recall: float) -> float:
    """Harmonic mean of precision and recall, 0 when both are 0."""
    denom = precision + recall
    return 0.0 if denom == 0.0 else 2.0 * precision * recall / denom


def fmax(scores, labels) -> FMaxResult:
    """Maximum F-measure over every distinct score taken as a threshold.

    Ties at a threshold are classified identically by the >= rule, so the
    result is deterministic and independent of example order.  When several
    thresholds achieve the maximum, the lowest one is reported.

    Raises UndefinedRecallError when the labels contain no positives.
    """
    s, y = _as_arrays(scores, labels)
    positives = int(y.sum())
    if positives == 0:
        raise UndefinedRecallError("no positive labels: recall undefined")

    order = np.argsort(s, kind="stable")
    s_sorted = s[order]
    y_sorted = y[order]
    # First index of each distinct value; threshold = that value classifies
    # everything from the index onward as positive.
    first = np.empty(s_sorted.shape, dtype=bool)
    first[0] = True
    np.not_equal(s_sorted[1:], s_sorted[:-1], out=first[1:])
    starts = np.nonzero(first)[0]

    suffix_tp = np.cumsum(y_sorted[::-1])[::-1]
    tp = suffix_tp[starts].astype(np.float64)
    n_pred = (s_sorted.size - starts).astype(np.float64)

    precision = tp / n_pred
    recall = tp / positives
    denom = precision + recall
    f = np.zeros_like(denom)
    np.divide(2.0 * precision * recall, denom, out=f, where=denom > 0.0)

    k = int(np.argmax(f))
    return FMaxResult(
        fmax=float(f[k]),
        argmax_threshold=float(s_sorted[starts[k]]),
        precision_at_max=float(precision[k]),
        recall_at_max=float(recall[k]),
    )
