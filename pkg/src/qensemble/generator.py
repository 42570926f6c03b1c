"""Synthetic prediction-matrix generator with calibrated accuracy.

Builds a pool of score vectors over binary labels where each distinct
predictor hits a target accuracy drawn from a configurable range, pairwise
correlation between predictors is controlled by mixing a shared latent
noise vector into each predictor's private noise (Gaussian copula), and
duplicate predictors are exact copies of their originals.  Everything is
deterministic given the seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr

from .core import PredictionMatrix, make_rng
from .errors import GenerationError


@dataclass(frozen=True)
class SyntheticPoolSpec:
    """Recipe for one synthetic pool.

    ``n_predictors`` counts the emitted predictors; it must be divisible
    by ``duplicates``, and each of the n_predictors / duplicates distinct
    predictors is emitted ``duplicates`` times.  ``correlation`` is the
    weight of the shared latent noise source, 0 for independent
    predictors.
    """

    n_examples: int
    n_predictors: int
    balance: float = 0.5
    accuracy_range: tuple[float, float] = (0.6, 0.9)
    correlation: float = 0.0
    duplicates: int = 1
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "accuracy_range", tuple(self.accuracy_range))
        if self.n_examples < 1:
            raise GenerationError(f"n_examples must be >= 1, got {self.n_examples}")
        if self.n_predictors < 1:
            raise GenerationError(f"n_predictors must be >= 1, got {self.n_predictors}")
        if not (0.0 < self.balance < 1.0):
            raise GenerationError(f"balance must be in (0, 1), got {self.balance}")
        lo, hi = self.accuracy_range
        if not (0.0 < lo <= hi <= 1.0):
            raise GenerationError(
                f"accuracy_range must satisfy 0 < low <= high <= 1, got {self.accuracy_range}"
            )
        if not (0.0 <= self.correlation < 1.0):
            raise GenerationError(f"correlation must be in [0, 1), got {self.correlation}")
        if self.duplicates < 1:
            raise GenerationError(f"duplicates must be >= 1, got {self.duplicates}")
        if self.n_predictors % self.duplicates != 0:
            raise GenerationError(
                f"n_predictors ({self.n_predictors}) must be divisible by "
                f"duplicates ({self.duplicates})"
            )

    @property
    def n_distinct(self) -> int:
        return self.n_predictors // self.duplicates


def generate_pool(spec: SyntheticPoolSpec) -> PredictionMatrix:
    """Draw a PredictionMatrix per the spec.

    Labels contain exactly round(balance * n_examples) positives; a
    balance that rounds to zero positives or zero negatives raises
    GenerationError.  Scores land in [0.5, 1) on examples where the
    predictor is correct about a positive or wrong about a negative, and
    in [0, 0.5) otherwise, so binarizing at 0.5 recovers the calibrated
    accuracy exactly.
    """
    rng = make_rng(spec.seed)
    m = spec.n_examples
    n_pos = round(spec.balance * m)
    if n_pos == 0 or n_pos == m:
        raise GenerationError(
            f"balance {spec.balance} yields {n_pos} positives out of {m} examples; "
            "need at least one of each class"
        )
    labels = np.zeros(m, dtype=np.int64)
    labels[:n_pos] = 1
    labels = rng.permutation(labels)

    accuracies = rng.uniform(spec.accuracy_range[0], spec.accuracy_range[1], spec.n_distinct)
    shared = rng.standard_normal(m)
    mix = spec.correlation
    private_scale = math.sqrt(1.0 - mix * mix)

    distinct_rows = np.empty((spec.n_distinct, m))
    for i in range(spec.n_distinct):
        latent = mix * shared + private_scale * rng.standard_normal(m)
        correct = ndtr(latent) <= accuracies[i]
        want_high = correct == (labels == 1)
        magnitude = rng.random(m)
        distinct_rows[i] = 0.5 * magnitude
        distinct_rows[i][want_high] += 0.5

    scores = np.empty((spec.n_predictors, m))
    ids = []
    for i in range(spec.n_distinct):
        base = f"p{i:03d}"
        for j in range(spec.duplicates):
            row = i * spec.duplicates + j
            scores[row] = distinct_rows[i]
            ids.append(base if j == 0 else f"{base}_dup{j}")
    return PredictionMatrix(scores=scores, labels=labels, predictor_ids=tuple(ids))
