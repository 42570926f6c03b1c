"""Shared data model: ensemble bitmask states, prediction matrices, seeded RNG.

An ensemble state is a plain ``int`` used as a bit mask over predictor
indices ``0..N-1``.  The empty mask is the START state of the selection
lattice and the all-ones mask is the FINISH state.  Integers keep hashing
and equality cheap, which matters because states key the Q-table, and they
scale to pools of hundreds of predictors without extra machinery.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .errors import InvalidActionError, ValidationError

START: int = 0


def finish_state(pool_size: int) -> int:
    """All-ones mask: the ensemble containing every predictor in the pool."""
    return (1 << pool_size) - 1


def state_cardinality(state: int) -> int:
    """Number of predictors in the ensemble."""
    return state.bit_count()


def members(state: int) -> list[int]:
    """Set bit indices in ascending order."""
    out = []
    bit = 0
    while state:
        if state & 1:
            out.append(bit)
        state >>= 1
        bit += 1
    return out


def state_from_members(indices) -> int:
    """Build a state mask from an iterable of predictor indices."""
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def ensemble_add(state: int, predictor: int, pool_size: int) -> int:
    """Add one predictor to the ensemble.

    Raises InvalidActionError if the predictor index is out of range for the
    pool or is already a member.
    """
    if predictor < 0 or predictor >= pool_size:
        raise InvalidActionError(
            f"predictor {predictor} out of range for pool of size {pool_size}"
        )
    bit = 1 << predictor
    if state & bit:
        raise InvalidActionError(f"predictor {predictor} is already a member")
    return state | bit


def successors(state: int, pool_size: int) -> list[int]:
    """States reachable by adding one predictor, ascending by added index.

    Empty exactly when ``state`` is the FINISH state.
    """
    return [state | (1 << p) for p in range(pool_size) if not state & (1 << p)]


def available_actions(state: int, pool_size: int) -> list[int]:
    """Predictor indices not yet in the ensemble, ascending."""
    return [p for p in range(pool_size) if not state & (1 << p)]


def format_state(state: int, predictor_ids=None) -> str:
    """Render a state as ``{a,b,...}`` using indices or supplied ids."""
    idx = members(state)
    if predictor_ids is not None:
        return "{" + ",".join(predictor_ids[i] for i in idx) + "}"
    return "{" + ",".join(str(i) for i in idx) + "}"


@dataclass(frozen=True)
class PredictionMatrix:
    """Score vectors for a pool of base predictors plus binary labels.

    ``scores`` has shape (n_predictors, n_examples) with every entry in
    [0, 1]; ``labels`` has shape (n_examples,) with entries in {0, 1}.
    Arrays are copied on construction and frozen, so instances are safe to
    share across threads.  Out-of-range scores are rejected, not clamped:
    silent clamping would hide ingestion bugs.
    """

    scores: np.ndarray
    labels: np.ndarray
    predictor_ids: tuple[str, ...]

    def __post_init__(self):
        scores = np.array(self.scores, dtype=np.float64, copy=True)
        labels = np.array(self.labels, dtype=np.int64, copy=True)
        ids = tuple(str(i) for i in self.predictor_ids)
        if scores.ndim != 2:
            raise ValidationError("scores must be a 2-D array (predictors x examples)")
        n, m = scores.shape
        if n < 1 or m < 1:
            raise ValidationError("need at least one predictor and one example")
        if labels.shape != (m,):
            raise ValidationError(
                f"labels length {labels.shape} does not match {m} examples"
            )
        if not np.isfinite(scores).all():
            raise ValidationError("scores contain non-finite values")
        if scores.min() < 0.0 or scores.max() > 1.0:
            raise ValidationError("scores outside [0, 1]")
        if not np.isin(labels, (0, 1)).all():
            raise ValidationError("labels must be 0 or 1")
        if len(ids) != n:
            raise ValidationError(f"{len(ids)} predictor ids for {n} predictors")
        if len(set(ids)) != n:
            raise ValidationError("predictor ids must be unique")
        scores.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "predictor_ids", ids)

    @property
    def n_predictors(self) -> int:
        return self.scores.shape[0]

    @property
    def n_examples(self) -> int:
        return self.scores.shape[1]

    def subset_examples(self, indices) -> "PredictionMatrix":
        """Restrict to the given example indices (e.g. one split of a fold)."""
        idx = np.asarray(indices, dtype=np.int64)
        return PredictionMatrix(self.scores[:, idx], self.labels[idx], self.predictor_ids)

    def subset_predictors(self, indices) -> "PredictionMatrix":
        """Restrict to the given predictor indices, preserving their order."""
        idx = list(indices)
        return PredictionMatrix(
            self.scores[np.asarray(idx, dtype=np.int64), :],
            self.labels,
            tuple(self.predictor_ids[i] for i in idx),
        )


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic generator: identical seed, identical draw sequence."""
    return np.random.default_rng(int(seed))


def derive_seed(master: int, *parts) -> int:
    """Stable 64-bit child seed from a master seed and a context path.

    Parts may be ints or strings; the derivation hashes their repr, so the
    same (master, parts) always yields the same child seed, on any platform.
    Used to split one master seed into independent streams for concurrent
    work units without sharing generator state.
    """
    key = repr((int(master),) + tuple(parts)).encode("utf-8")
    digest = hashlib.sha256(key).digest()
    return int.from_bytes(digest[:8], "little")
