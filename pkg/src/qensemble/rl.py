"""Tabular Q-learning over the lattice of predictor subsets.

An episode starts from the empty ensemble and adds one predictor per step
until the full pool is reached.  Each transition is rewarded with the
validation F-max of the successor ensemble, so the agent learns which
growth paths pass through strong small ensembles.  Action selection is
epsilon-greedy; exploration either picks a uniformly random non-greedy
action or, when a diversity measure is configured, jumps to the successor
most diverse from the current ensemble.

After every episode the greedy policy path is extracted and its
best-rewarded state recorded as that episode's pick.  Selection stops once
the pick is identical for ``convergence_window`` consecutive episodes, or
at ``max_episodes`` with the best pick seen so far.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .combiner import COMBINE_RULES, RULE_WEIGHTED, combine, compute_weights
from .core import (
    START,
    PredictionMatrix,
    available_actions,
    ensemble_add,
    finish_state,
    make_rng,
)
from .diversity import (
    DIVERSITY_MEASURES,
    DIVERSITY_METHODS,
    KAPPA_DENOMINATORS,
    KAPPA_STANDARD,
    METHOD_DIVERSITY1,
    pair_diversity,
)
from .errors import ConfigError, InvalidActionError, InvalidEnsembleError, ValidationError
from .metrics import FMaxResult, fmax

STRATEGY_GREEDY = "RL_greedy"
STRATEGY_BACKTRACK = "RL_backtrack"
STRATEGY_PESSIMISTIC = "RL_pessimistic"
UNIMPLEMENTED_STRATEGIES = (STRATEGY_BACKTRACK, STRATEGY_PESSIMISTIC)
DIVERSITY_STRATEGY_PREFIX = "RL_diversity_"

IMPLEMENTED_STRATEGIES = (STRATEGY_GREEDY,) + tuple(
    DIVERSITY_STRATEGY_PREFIX + m for m in DIVERSITY_MEASURES
)
KNOWN_STRATEGIES = IMPLEMENTED_STRATEGIES + UNIMPLEMENTED_STRATEGIES


@dataclass(frozen=True)
class LearningConfig:
    """Hyperparameters for one ensemble-selection run."""

    alpha: float = 0.1
    gamma: float = 0.9
    epsilon: float = 0.1
    measure: str | None = None
    method: str = METHOD_DIVERSITY1
    convergence_window: int = 10
    max_episodes: int = 1000
    seed: int = 0
    combine_rule: str = RULE_WEIGHTED
    binarize_threshold: float = 0.5
    kappa_denominator: str = KAPPA_STANDARD

    def __post_init__(self):
        if not (0.0 < self.alpha <= 1.0):
            raise ValidationError(f"alpha must be in (0, 1], got {self.alpha}")
        if not (0.0 <= self.gamma <= 1.0):
            raise ValidationError(f"gamma must be in [0, 1], got {self.gamma}")
        if not (0.0 <= self.epsilon <= 1.0):
            raise ValidationError(f"epsilon must be in [0, 1], got {self.epsilon}")
        if self.measure is not None and self.measure not in DIVERSITY_MEASURES:
            raise ValidationError(f"unknown diversity measure {self.measure!r}")
        if self.method not in DIVERSITY_METHODS:
            raise ValidationError(f"unknown diversity method {self.method!r}")
        if self.convergence_window < 1:
            raise ValidationError("convergence_window must be >= 1")
        if self.max_episodes < self.convergence_window:
            raise ValidationError("max_episodes must be >= convergence_window")
        if self.combine_rule not in COMBINE_RULES:
            raise ValidationError(f"unknown combination rule {self.combine_rule!r}")
        if not (0.0 <= self.binarize_threshold <= 1.0):
            raise ValidationError("binarize_threshold must be in [0, 1]")
        if self.kappa_denominator not in KAPPA_DENOMINATORS:
            raise ValidationError(f"unknown kappa denominator {self.kappa_denominator!r}")

    @property
    def strategy(self) -> str:
        if self.measure is None:
            return STRATEGY_GREEDY
        return DIVERSITY_STRATEGY_PREFIX + self.measure


def strategy_config(name: str, **overrides) -> LearningConfig:
    """Build a LearningConfig for a named selection strategy.

    Recognized but unimplemented strategy slots raise NotImplementedError
    so callers can report them as such instead of failing silently.
    """
    if name in UNIMPLEMENTED_STRATEGIES:
        raise NotImplementedError(f"strategy {name} is a recognized slot but not implemented")
    if name == STRATEGY_GREEDY:
        return LearningConfig(measure=None, **overrides)
    if name.startswith(DIVERSITY_STRATEGY_PREFIX):
        measure = name[len(DIVERSITY_STRATEGY_PREFIX):]
        if measure in DIVERSITY_MEASURES:
            return LearningConfig(measure=measure, **overrides)
    raise ConfigError(f"unknown selection strategy {name!r}")


class QTable:
    """Sparse action-value table; absent entries read as 0."""

    __slots__ = ("_entries",)

    def __init__(self):
        self._entries: dict[tuple[int, int], float] = {}

    def get(self, state: int, action: int) -> float:
        return self._entries.get((state, action), 0.0)

    def set(self, state: int, action: int, value: float) -> None:
        if not np.isfinite(value):
            raise ValidationError(f"Q-value must be finite, got {value}")
        self._entries[(state, action)] = float(value)

    def __len__(self) -> int:
        return len(self._entries)

    def items(self):
        return self._entries.items()


def reward(state: int, cache: dict, matrix: PredictionMatrix, weights,
           rule: str = RULE_WEIGHTED) -> float:
    """Validation F-max of the combined ensemble, memoized by state."""
    if state == START:
        raise InvalidEnsembleError("the empty ensemble has no reward")
    hit = cache.get(state)
    if hit is None:
        hit = fmax(combine(state, matrix, weights, rule), matrix.labels)
        cache[state] = hit
    return hit.fmax


def q_update(
    q: QTable,
    state: int,
    action: int,
    reward_value: float,
    next_state: int,
    alpha: float,
    gamma: float,
    pool_size: int,
) -> QTable:
    """One Watkins update for the transition (state, action) -> next_state.

    The bootstrap term is max_a' Q(next_state, a'), taken as 0 when
    next_state is the full pool (no actions remain).
    """
    if next_state != ensemble_add(state, action, pool_size):
        raise InvalidActionError(
            f"next_state {next_state} is not state {state} plus predictor {action}"
        )
    if next_state == finish_state(pool_size):
        best_next = 0.0
    else:
        best_next = max(q.get(next_state, a) for a in available_actions(next_state, pool_size))
    old = q.get(state, action)
    q.set(state, action, old + alpha * (reward_value + gamma * best_next - old))
    return q


def _greedy_action(q: QTable, state: int, actions: list[int]) -> int:
    """Lowest-index action among the Q-maximizing ones."""
    best = actions[0]
    best_q = q.get(state, best)
    for a in actions[1:]:
        v = q.get(state, a)
        if v > best_q:
            best, best_q = a, v
    return best


def choose_action(
    q: QTable,
    state: int,
    config: LearningConfig,
    rng: np.random.Generator,
    matrix: PredictionMatrix,
    weights,
) -> tuple[int, bool]:
    """Epsilon-greedy action selection; returns (action, explored flag).

    Exploitation takes the Q-argmax with ties broken uniformly at random.
    Exploration without a measure takes a uniformly random action other
    than the greedy one; with a measure it jumps to the successor of
    maximal ``pair_diversity`` (ties broken by lowest predictor index,
    consuming no randomness).  A lone available action is forced.
    """
    n = matrix.n_predictors
    if state == finish_state(n):
        raise InvalidActionError("no actions available from the full ensemble")
    actions = available_actions(state, n)
    if len(actions) == 1:
        return actions[0], False
    if rng.random() >= config.epsilon:
        top = max(q.get(state, a) for a in actions)
        tied = [a for a in actions if q.get(state, a) == top]
        if len(tied) == 1:
            return tied[0], False
        return tied[int(rng.integers(len(tied)))], False
    if config.measure is None:
        greedy = _greedy_action(q, state, actions)
        others = [a for a in actions if a != greedy]
        return others[int(rng.integers(len(others)))], True
    if state == START:
        # no reference ensemble to be diverse from yet
        return actions[int(rng.integers(len(actions)))], True
    best_action = actions[0]
    best_div = -np.inf
    for a in actions:
        div = pair_diversity(
            state,
            ensemble_add(state, a, n),
            matrix,
            weights,
            config.measure,
            config.method,
            config.combine_rule,
            config.binarize_threshold,
            config.kappa_denominator,
        )
        if div > best_div:
            best_action, best_div = a, div
    return best_action, True


@dataclass(frozen=True)
class EpisodeTrace:
    """States visited by one episode with per-step rewards and explored flags."""

    states: tuple[int, ...]
    rewards: tuple[float, ...]
    explored: tuple[bool, ...]


def run_episode(
    q: QTable,
    config: LearningConfig,
    rng: np.random.Generator,
    matrix: PredictionMatrix,
    weights,
    cache: dict,
) -> EpisodeTrace:
    """Walk the lattice from empty to full pool, updating Q along the way."""
    n = matrix.n_predictors
    finish = finish_state(n)
    state = START
    states = [state]
    rewards: list[float] = []
    explored: list[bool] = []
    while state != finish:
        action, was_explored = choose_action(q, state, config, rng, matrix, weights)
        next_state = ensemble_add(state, action, n)
        r = reward(next_state, cache, matrix, weights, config.combine_rule)
        q_update(q, state, action, r, next_state, config.alpha, config.gamma, n)
        states.append(next_state)
        rewards.append(r)
        explored.append(was_explored)
        state = next_state
    return EpisodeTrace(tuple(states), tuple(rewards), tuple(explored))


def greedy_policy_path(q: QTable, pool_size: int) -> tuple[int, ...]:
    """Follow argmax-Q actions from the empty state to the full pool.

    Ties break to the lowest predictor index, so the path is a pure
    function of the table.
    """
    finish = finish_state(pool_size)
    state = START
    path = [state]
    while state != finish:
        action = _greedy_action(q, state, available_actions(state, pool_size))
        state = ensemble_add(state, action, pool_size)
        path.append(state)
    return tuple(path)


@dataclass(frozen=True)
class SelectionResult:
    """Outcome of one selection run."""

    final_ensemble: int
    policy_path: tuple[int, ...]
    episodes_run: int
    validation_fmax: float
    picks: tuple[int, ...] = field(repr=False)
    converged: bool = True


def _path_pick(path, cache, matrix, weights, rule) -> tuple[int, float]:
    """Best-rewarded state on a policy path; earliest (smallest) wins ties."""
    best_state = path[1]
    best_fmax = reward(best_state, cache, matrix, weights, rule)
    for state in path[2:]:
        r = reward(state, cache, matrix, weights, rule)
        if r > best_fmax:
            best_state, best_fmax = state, r
    return best_state, best_fmax


def select_ensemble(
    config: LearningConfig,
    matrix: PredictionMatrix,
    weights=None,
) -> SelectionResult:
    """Learn a selection policy and return the converged ensemble pick.

    Runs episodes until the greedy path's best-rewarded state is the same
    for ``convergence_window`` consecutive episodes.  If ``max_episodes``
    is exhausted first, the best pick observed across all episodes is
    returned with ``converged=False``.
    """
    if matrix.n_predictors < 1:
        raise ValidationError("need at least one predictor")
    if weights is None:
        weights = compute_weights(matrix)
    rng = make_rng(config.seed)
    q = QTable()
    cache: dict[int, FMaxResult] = {}
    picks: list[int] = []
    streak_pick = None
    streak = 0
    best_pick = None
    best_fmax = -np.inf
    best_path: tuple[int, ...] = ()
    episodes_run = 0
    converged = False
    for _ in range(config.max_episodes):
        run_episode(q, config, rng, matrix, weights, cache)
        episodes_run += 1
        path = greedy_policy_path(q, matrix.n_predictors)
        pick, pick_fmax = _path_pick(path, cache, matrix, weights, config.combine_rule)
        picks.append(pick)
        if pick_fmax > best_fmax:
            best_pick, best_fmax, best_path = pick, pick_fmax, path
        if pick == streak_pick:
            streak += 1
        else:
            streak_pick, streak = pick, 1
        if streak >= config.convergence_window:
            converged = True
            best_pick, best_fmax, best_path = pick, pick_fmax, path
            break
    return SelectionResult(
        final_ensemble=best_pick,
        policy_path=best_path,
        episodes_run=episodes_run,
        validation_fmax=float(best_fmax),
        picks=tuple(picks),
        converged=converged,
    )
