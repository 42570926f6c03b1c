"""Diversity measures between score vectors and between candidate ensembles.

Unsupervised measures (one minus cosine, one minus Pearson correlation,
Euclidean distance) compare raw score vectors.  Supervised measures (one
minus Yule's Q, one minus kappa) compare correctness patterns through a
2x2 contingency table of joint correctness, binarized at a configurable
threshold.

Two computation methods lift a pairwise measure to ensembles that differ
by one predictor:

* ``diversity1`` combines both ensembles and measures between the two
  combined vectors.
* ``diversity2`` measures between the newly added predictor's raw scores
  and the current ensemble's combined vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import PredictionMatrix, state_cardinality
from .combiner import RULE_WEIGHTED, combine
from .errors import (
    DegenerateVectorError,
    DiversityUndefinedError,
    UndefinedStatisticError,
    ValidationError,
)

VECTOR_MEASURES = ("cosine", "correlation", "euclidean")
TABLE_MEASURES = ("yule_q", "kappa")
DIVERSITY_MEASURES = VECTOR_MEASURES + TABLE_MEASURES

METHOD_DIVERSITY1 = "diversity1"
METHOD_DIVERSITY2 = "diversity2"
DIVERSITY_METHODS = (METHOD_DIVERSITY1, METHOD_DIVERSITY2)

KAPPA_STANDARD = "standard"
KAPPA_AS_PRINTED = "as_printed"
KAPPA_DENOMINATORS = (KAPPA_STANDARD, KAPPA_AS_PRINTED)


def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 1 or b.ndim != 1 or a.shape != b.shape:
        raise ValidationError(f"expected equal-length vectors, got {a.shape} and {b.shape}")
    if a.size == 0:
        raise ValidationError("empty vectors")
    return a, b


def cosine_diversity(a, b) -> float:
    """One minus cosine similarity; 0 for parallel vectors, up to 2."""
    a, b = _pair(a, b)
    na = np.linalg.norm(a)
    nb = np.linalg.norm(b)
    if na == 0.0 or nb == 0.0:
        raise DegenerateVectorError("cosine diversity needs nonzero-norm vectors")
    # clip: rounding can push the similarity a hair past +/-1
    return float(min(max(1.0 - (a @ b) / (na * nb), 0.0), 2.0))


def correlation_diversity(a, b) -> float:
    """One minus Pearson correlation; 0 for perfectly correlated vectors."""
    a, b = _pair(a, b)
    da = a - a.mean()
    db = b - b.mean()
    va = da @ da
    vb = db @ db
    if va == 0.0 or vb == 0.0:
        raise DegenerateVectorError("correlation diversity needs non-constant vectors")
    return float(min(max(1.0 - (da @ db) / math.sqrt(va * vb), 0.0), 2.0))


def euclidean_diversity(a, b) -> float:
    a, b = _pair(a, b)
    return float(np.linalg.norm(a - b))


@dataclass(frozen=True)
class ContingencyTable:
    """Joint correctness counts for two predictors on labelled examples.

    n11 both correct, n10 only the first correct, n01 only the second,
    n00 neither.
    """

    n11: int
    n10: int
    n01: int
    n00: int

    def __post_init__(self):
        for field in ("n11", "n10", "n01", "n00"):
            value = getattr(self, field)
            if not isinstance(value, (int, np.integer)) or value < 0:
                raise ValidationError(f"{field} must be a non-negative count, got {value!r}")

    @property
    def total(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00


def contingency(a, b, labels, threshold: float = 0.5) -> ContingencyTable:
    """Tally joint correctness of two score vectors binarized at threshold.

    A predictor is correct on an example when its score >= threshold
    matches the positive label (and score < threshold matches negative).
    """
    a, b = _pair(a, b)
    y = np.asarray(labels)
    if y.shape != a.shape:
        raise ValidationError(f"labels shape {y.shape} does not match vectors {a.shape}")
    if not (0.0 <= threshold <= 1.0):
        raise ValidationError(f"binarization threshold must be in [0, 1], got {threshold}")
    positive = y == 1
    correct_a = (a >= threshold) == positive
    correct_b = (b >= threshold) == positive
    return ContingencyTable(
        n11=int(np.sum(correct_a & correct_b)),
        n10=int(np.sum(correct_a & ~correct_b)),
        n01=int(np.sum(~correct_a & correct_b)),
        n00=int(np.sum(~correct_a & ~correct_b)),
    )


def yule_q_diversity(table: ContingencyTable) -> float:
    """One minus Yule's Q of the correctness table; range [0, 2]."""
    concordant = table.n11 * table.n00
    discordant = table.n01 * table.n10
    denom = concordant + discordant
    if denom == 0:
        raise UndefinedStatisticError("Yule's Q undefined: n11*n00 + n01*n10 = 0")
    q = (concordant - discordant) / denom
    return 1.0 - q


def kappa_diversity(table: ContingencyTable, denominator: str = KAPPA_STANDARD) -> float:
    """One minus the pairwise interrater kappa of the correctness table.

    ``denominator`` selects between the standard sum-of-products form
    (n11+n10)(n01+n00) + (n11+n01)(n10+n00), which keeps kappa in [-1, 1],
    and an alternate ``as_printed`` form dividing by the product of all
    four marginal sums, kept for comparison despite its scale depending on
    the number of examples.
    """
    if denominator not in KAPPA_DENOMINATORS:
        raise ValidationError(f"unknown kappa denominator {denominator!r}")
    numer = 2 * (table.n11 * table.n00 - table.n01 * table.n10)
    row1 = table.n11 + table.n10
    row0 = table.n01 + table.n00
    col1 = table.n11 + table.n01
    col0 = table.n10 + table.n00
    if denominator == KAPPA_STANDARD:
        denom = row1 * row0 + col1 * col0
    else:
        denom = row1 * row0 * col1 * col0
    if denom == 0:
        raise UndefinedStatisticError("kappa undefined: zero denominator")
    return 1.0 - numer / denom


def measure_vectors(
    measure: str,
    a,
    b,
    labels=None,
    threshold: float = 0.5,
    kappa_denominator: str = KAPPA_STANDARD,
) -> float:
    """Apply a named measure to two score vectors.

    Supervised measures (yule_q, kappa) go through the correctness
    contingency table and therefore require labels.
    """
    if measure == "cosine":
        return cosine_diversity(a, b)
    if measure == "correlation":
        return correlation_diversity(a, b)
    if measure == "euclidean":
        return euclidean_diversity(a, b)
    if measure in TABLE_MEASURES:
        if labels is None:
            raise ValidationError(f"measure {measure!r} requires labels")
        table = contingency(a, b, labels, threshold)
        if measure == "yule_q":
            return yule_q_diversity(table)
        return kappa_diversity(table, kappa_denominator)
    raise ValidationError(f"unknown diversity measure {measure!r}")


def pair_diversity(
    current: int,
    candidate: int,
    matrix: PredictionMatrix,
    weights,
    measure: str,
    method: str = METHOD_DIVERSITY1,
    rule: str = RULE_WEIGHTED,
    threshold: float = 0.5,
    kappa_denominator: str = KAPPA_STANDARD,
) -> float:
    """Diversity between an ensemble and a candidate extending it by one.

    Raises DiversityUndefinedError for an empty current ensemble (no
    reference vector exists; callers explore uniformly from the empty
    state).  Candidates whose statistic is undefined (degenerate
    agreement table or degenerate combined vector) are assigned 0, the
    least attractive value for exploration.
    """
    if method not in DIVERSITY_METHODS:
        raise ValidationError(f"unknown diversity method {method!r}")
    if current == 0:
        raise DiversityUndefinedError("diversity is undefined from the empty ensemble")
    added = candidate ^ current
    if (candidate & current) != current or state_cardinality(added) != 1:
        raise ValidationError(
            "candidate must extend the current ensemble by exactly one predictor"
        )
    vec_current = combine(current, matrix, weights, rule)
    if method == METHOD_DIVERSITY1:
        other = combine(candidate, matrix, weights, rule)
    else:
        other = matrix.scores[added.bit_length() - 1]
    try:
        return measure_vectors(
            measure, vec_current, other, matrix.labels, threshold, kappa_denominator
        )
    except (UndefinedStatisticError, DegenerateVectorError):
        return 0.0
