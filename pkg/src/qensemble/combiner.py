"""Aggregate member scores into an ensemble score vector.

The default combination rule is a performance-weighted average: each base
predictor is weighted by its F-max on the validation set, and the weighted
mean normalises internally, so weights need not sum to one.  Unweighted
mean and median are available behind the same interface as alternates.
``RunningAggregate`` supports extending an ensemble by one member at a time
via a cumulative moving average, matching the batch result to 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PredictionMatrix, members, state_cardinality
from .errors import (
    DegenerateWeightsError,
    InvalidActionError,
    InvalidEnsembleError,
    ValidationError,
)
from .metrics import fmax

RULE_WEIGHTED = "weighted"
RULE_MEAN = "mean"
RULE_MEDIAN = "median"
COMBINE_RULES = (RULE_WEIGHTED, RULE_MEAN, RULE_MEDIAN)


def compute_weights(matrix: PredictionMatrix) -> np.ndarray:
    """Per-predictor weight: its F-max on the given (validation) matrix."""
    return np.array(
        [fmax(matrix.scores[p], matrix.labels).fmax for p in range(matrix.n_predictors)]
    )


def _check_weights(weights, n: int) -> np.ndarray:
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (n,):
        raise ValidationError(f"expected {n} weights, got shape {w.shape}")
    if not np.isfinite(w).all() or (w < 0).any():
        raise ValidationError("weights must be finite and non-negative")
    return w


def combine(
    ensemble: int,
    matrix: PredictionMatrix,
    weights,
    rule: str = RULE_WEIGHTED,
) -> np.ndarray:
    """Combined score vector of the ensemble's members.

    Raises InvalidEnsembleError for the empty ensemble and
    DegenerateWeightsError when every member weight is zero (weighted rule).
    """
    if ensemble == 0:
        raise InvalidEnsembleError("cannot combine the empty ensemble")
    idx = members(ensemble)
    if idx[-1] >= matrix.n_predictors:
        raise InvalidEnsembleError(
            f"state has member {idx[-1]} but pool size is {matrix.n_predictors}"
        )
    rows = matrix.scores[idx, :]
    if rule == RULE_WEIGHTED:
        w = _check_weights(weights, matrix.n_predictors)[idx]
        total = w.sum()
        if total == 0.0:
            raise DegenerateWeightsError("all member weights are zero")
        return (w @ rows) / total
    if rule == RULE_MEAN:
        return rows.mean(axis=0)
    if rule == RULE_MEDIAN:
        return np.median(rows, axis=0)
    raise ValidationError(f"unknown combination rule {rule!r}")


@dataclass(frozen=True)
class RunningAggregate:
    """Weighted-average state of an ensemble being grown one member at a time.

    ``combined`` is the weighted mean of the member score vectors and
    ``weight_sum`` their total weight.  The empty aggregate has a zero
    vector and zero weight sum by convention.
    """

    combined: np.ndarray
    weight_sum: float
    members: int

    def cardinality(self) -> int:
        return state_cardinality(self.members)


def empty_aggregate(n_examples: int) -> RunningAggregate:
    return RunningAggregate(np.zeros(n_examples), 0.0, 0)


def extend_aggregate(
    agg: RunningAggregate,
    predictor: int,
    matrix: PredictionMatrix,
    weights,
) -> RunningAggregate:
    """Fold one more predictor into the running weighted average.

    Equivalent (to 1e-9) to a batch ``combine`` over the extended member
    set, but costs O(n_examples) per step.
    """
    if agg.members & (1 << predictor):
        raise InvalidActionError(f"predictor {predictor} is already a member")
    if predictor < 0 or predictor >= matrix.n_predictors:
        raise InvalidActionError(
            f"predictor {predictor} out of range for pool of size {matrix.n_predictors}"
        )
    w = _check_weights(weights, matrix.n_predictors)
    w_p = float(w[predictor])
    total = agg.weight_sum + w_p
    if total == 0.0:
        raise DegenerateWeightsError("all member weights are zero")
    combined = (agg.weight_sum * agg.combined + w_p * matrix.scores[predictor]) / total
    return RunningAggregate(combined, total, agg.members | (1 << predictor))
