"""Benchmarking protocol: splits, growing pools, curves, and reports.

An experiment takes a prediction matrix and a grid of selection
strategies and exploration rates.  For every repetition the pool is
permuted and grown in fixed steps; for every fold and pool prefix each
strategy selects an ensemble on the validation split and is scored on the
test split.  Fold scores are averaged within a repetition and standard
errors are taken across repetitions.  Each curve of test F-max against
pool size is summarized by its normalized trapezoidal area, and parsimony
ratios compare selected ensembles to the full-ensemble baseline at
designated checkpoints.

The resulting report is a plain dict ready for canonical JSON
serialization; it embeds per-repetition values so every aggregate can be
recomputed from the report alone.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .combiner import RULE_WEIGHTED, combine, compute_weights
from .core import (
    PredictionMatrix,
    derive_seed,
    finish_state,
    make_rng,
    members,
    state_cardinality,
)
from .diversity import DIVERSITY_METHODS, KAPPA_STANDARD, METHOD_DIVERSITY1
from .errors import (
    ConfigError,
    CurveError,
    EnsembleSelectionError,
    ReportError,
    SplitError,
    ValidationError,
)
from .metrics import fmax
from .rl import (
    KNOWN_STRATEGIES,
    STRATEGY_GREEDY,
    LearningConfig,
    UNIMPLEMENTED_STRATEGIES,
    select_ensemble,
    strategy_config,
)

REPORT_SCHEMA_VERSION = 1

DEFAULT_EPSILONS = (0.01, 0.1, 0.25, 0.5)


@dataclass(frozen=True)
class SplitSpec:
    """Rotating train/validation/test partition for k-fold evaluation.

    Examples are shuffled once and cut into ``folds`` near-equal blocks;
    the fractions decide how many blocks feed each role.  Fold i uses
    block i (and successors) for test, the following block(s) for
    validation, and the rest for training.
    """

    fractions: tuple[float, float, float] = (0.6, 0.2, 0.2)
    folds: int = 5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "fractions", tuple(float(f) for f in self.fractions))
        if len(self.fractions) != 3 or any(f <= 0 for f in self.fractions):
            raise SplitError(f"fractions must be three positive numbers, got {self.fractions}")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise SplitError(f"fractions must sum to 1, got {self.fractions}")
        if self.folds < 2:
            raise SplitError(f"need at least 2 folds, got {self.folds}")
        _, val_frac, test_frac = self.fractions
        for name, frac, count in (
            ("validation", val_frac, self.n_val_blocks),
            ("test", test_frac, self.n_test_blocks),
        ):
            if count < 1:
                raise SplitError(f"{name} fraction {frac} yields no blocks at {self.folds} folds")
            if abs(count / self.folds - frac) > 1e-9:
                raise SplitError(
                    f"{name} fraction {frac} is not a whole number of blocks "
                    f"at {self.folds} folds"
                )
        if self.n_val_blocks + self.n_test_blocks >= self.folds:
            raise SplitError("no blocks left for training")

    @property
    def n_val_blocks(self) -> int:
        return round(self.fractions[1] * self.folds)

    @property
    def n_test_blocks(self) -> int:
        return round(self.fractions[2] * self.folds)


def split(
    matrix: PredictionMatrix, spec: SplitSpec, fold_index: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index triple (train, validation, test) for one fold.

    Deterministic given the spec seed; the three sets partition all
    examples, and validation/test blocks rotate with the fold index.
    """
    if not (0 <= fold_index < spec.folds):
        raise SplitError(f"fold_index {fold_index} out of range for {spec.folds} folds")
    m = matrix.n_examples
    if m < spec.folds:
        raise SplitError(f"cannot cut {m} examples into {spec.folds} blocks")
    blocks = np.array_split(make_rng(spec.seed).permutation(m), spec.folds)
    test_ids = {(fold_index + j) % spec.folds for j in range(spec.n_test_blocks)}
    val_ids = {
        (fold_index + spec.n_test_blocks + j) % spec.folds for j in range(spec.n_val_blocks)
    }
    train = np.sort(np.concatenate([b for i, b in enumerate(blocks)
                                    if i not in test_ids and i not in val_ids]))
    val = np.sort(np.concatenate([blocks[i] for i in sorted(val_ids)]))
    test = np.sort(np.concatenate([blocks[i] for i in sorted(test_ids)]))
    return train, val, test


def grow_pool(predictors, step: int, rng: np.random.Generator) -> list[tuple[int, ...]]:
    """Nested pools: prefixes of a random permutation, growing by ``step``.

    The last pool always covers every predictor even when the total is
    not a multiple of the step.
    """
    if step < 1:
        raise ValidationError(f"step must be >= 1, got {step}")
    order = [int(p) for p in rng.permutation(np.asarray(predictors))]
    n = len(order)
    sizes = list(range(step, n + 1, step))
    if not sizes or sizes[-1] != n:
        sizes.append(n)
    return [tuple(order[:size]) for size in sizes]


def auesc(curve_points) -> float:
    """Normalized area under a (pool_size, performance) curve.

    Trapezoidal area divided by the x-range, i.e. the mean performance
    over the measured pool sizes; a constant curve maps to its constant.
    """
    points = list(curve_points)
    if len(points) < 2:
        raise CurveError("need at least two curve points")
    xs = np.asarray([p[0] for p in points], dtype=np.float64)
    ys = np.asarray([p[1] for p in points], dtype=np.float64)
    if not (np.diff(xs) > 0).all():
        raise CurveError("pool sizes must be strictly increasing")
    area = float(np.sum((ys[1:] + ys[:-1]) / 2.0 * np.diff(xs)))
    return area / float(xs[-1] - xs[0])


def parsimony_ratios(selected_sizes, selected_perf, full_sizes, full_perf, checkpoints):
    """Size and performance ratios against the full ensemble at checkpoints.

    size_ratio@K = mean selected size / K; perf_ratio@K = mean selected
    test F-max / full-ensemble test F-max at pool size K.  Returns
    {checkpoint: {"size_ratio": ..., "perf_ratio": ...}}.
    """
    full_sizes = [int(s) for s in full_sizes]
    out = {}
    for k in checkpoints:
        k = int(k)
        if k not in full_sizes:
            raise ReportError(f"checkpoint {k} is not among the measured pool sizes {full_sizes}")
        i = full_sizes.index(k)
        out[k] = {
            "size_ratio": float(selected_sizes[i]) / k,
            "perf_ratio": float(selected_perf[i]) / float(full_perf[i]),
        }
    return out


def full_ensemble_baseline(pool, matrix: PredictionMatrix, weights) -> tuple[float, int]:
    """Test F-max and size of the ensemble holding every pool member.

    ``pool`` indexes predictors of ``matrix``; ``weights`` is aligned
    with the full matrix.
    """
    pool = list(pool)
    sub = matrix.subset_predictors(pool)
    w = np.asarray(weights, dtype=np.float64)[pool]
    scores = combine(finish_state(sub.n_predictors), sub, w)
    return fmax(scores, sub.labels).fmax, len(pool)


def best_base_baseline(
    pool, val_matrix: PredictionMatrix, test_matrix: PredictionMatrix, weights=None
) -> float:
    """Test F-max of the pool member with the best validation F-max.

    ``weights`` may pass in precomputed per-predictor validation F-max
    values to avoid recomputation; ties go to the first pool member.
    """
    pool = list(pool)
    if not pool:
        raise ValidationError("empty pool")
    if weights is None:
        weights = compute_weights(val_matrix)
    w = np.asarray(weights, dtype=np.float64)[pool]
    best = pool[int(np.argmax(w))]
    return fmax(test_matrix.scores[best], test_matrix.labels).fmax


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid and protocol parameters for one experiment."""

    algorithms: tuple[str, ...] = (STRATEGY_GREEDY,)
    methods: tuple[str, ...] = (METHOD_DIVERSITY1,)
    epsilons: tuple[float, ...] = DEFAULT_EPSILONS
    step: int = 10
    repetitions: int = 10
    checkpoints: tuple[int, ...] = ()
    alpha: float = 0.1
    gamma: float = 0.9
    convergence_window: int = 10
    max_episodes: int = 1000
    combine_rule: str = RULE_WEIGHTED
    binarize_threshold: float = 0.5
    kappa_denominator: str = KAPPA_STANDARD
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        object.__setattr__(self, "methods", tuple(self.methods))
        object.__setattr__(self, "epsilons", tuple(float(e) for e in self.epsilons))
        object.__setattr__(self, "checkpoints", tuple(int(c) for c in self.checkpoints))
        if not self.algorithms:
            raise ConfigError("no algorithms configured")
        for name in self.algorithms:
            if name not in KNOWN_STRATEGIES:
                raise ConfigError(
                    f"unknown selection strategy {name!r}; known: {', '.join(KNOWN_STRATEGIES)}"
                )
        if len(set(self.algorithms)) != len(self.algorithms):
            raise ConfigError("duplicate algorithm entries")
        if not self.methods:
            raise ConfigError("no diversity methods configured")
        for method in self.methods:
            if method not in DIVERSITY_METHODS:
                raise ConfigError(f"unknown diversity method {method!r}")
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("duplicate method entries")
        if not self.epsilons:
            raise ConfigError("no epsilon values configured")
        if any(not (0.0 <= e <= 1.0) for e in self.epsilons):
            raise ConfigError(f"epsilons must lie in [0, 1], got {self.epsilons}")
        if len(set(self.epsilons)) != len(self.epsilons):
            raise ConfigError("duplicate epsilon entries")
        if self.step < 1:
            raise ConfigError(f"step must be >= 1, got {self.step}")
        if self.repetitions < 1:
            raise ConfigError(f"repetitions must be >= 1, got {self.repetitions}")
        if any(c < 1 for c in self.checkpoints):
            raise ConfigError("checkpoints must be positive pool sizes")
        # delegate hyperparameter and rule-name range checks
        try:
            self.learning_config(self.epsilons[0], None, self.methods[0], 0)
        except ValidationError as exc:
            raise ConfigError(str(exc)) from exc

    def learning_config(self, epsilon, measure, method, seed) -> LearningConfig:
        return LearningConfig(
            alpha=self.alpha,
            gamma=self.gamma,
            epsilon=epsilon,
            measure=measure,
            method=method,
            convergence_window=self.convergence_window,
            max_episodes=self.max_episodes,
            seed=seed,
            combine_rule=self.combine_rule,
            binarize_threshold=self.binarize_threshold,
            kappa_denominator=self.kappa_denominator,
        )


def _grid_cells(config: ExperimentConfig) -> list[dict]:
    """One cell per (algorithm, method); method is None for measure-free
    strategies and unimplemented slots."""
    cells = []
    for name in config.algorithms:
        if name in UNIMPLEMENTED_STRATEGIES:
            cells.append({"algorithm": name, "method": None, "label": name})
            continue
        base = strategy_config(name)
        if base.measure is None:
            cells.append({"algorithm": name, "method": None, "label": name})
        else:
            for method in config.methods:
                label = name if len(config.methods) == 1 else f"{name}__{method}"
                cells.append({"algorithm": name, "method": method, "label": label})
    labels = [c["label"] for c in cells]
    if len(set(labels)) != len(labels):
        raise ConfigError(f"grid produces duplicate cell labels: {labels}")
    return cells


def _stderr(values: np.ndarray) -> float:
    if values.size <= 1:
        return 0.0
    return float(np.std(values, ddof=1) / np.sqrt(values.size))


def _curve_dict(pool_sizes, rep_fmax, rep_size, non_converged=None) -> dict:
    """Assemble curve points plus area from per-repetition matrices.

    ``rep_fmax`` and ``rep_size`` are (n_points, n_repetitions) arrays of
    fold-averaged values.
    """
    points = []
    for i, size in enumerate(pool_sizes):
        point = {
            "pool_size": int(size),
            "mean_fmax": float(np.mean(rep_fmax[i])),
            "stderr": _stderr(rep_fmax[i]),
            "mean_size": float(np.mean(rep_size[i])),
            "per_repetition": {
                "fmax": [float(v) for v in rep_fmax[i]],
                "size": [float(v) for v in rep_size[i]],
            },
        }
        if non_converged is not None:
            point["non_converged_runs"] = int(non_converged[i])
        points.append(point)
    if len(points) >= 2:
        area = auesc([(p["pool_size"], p["mean_fmax"]) for p in points])
    else:
        # a single measured pool size has no x-range; fall back to its mean
        area = points[0]["mean_fmax"]
    return {"points": points, "auesc": float(area)}


def _path_as_ids(path, pool, matrix: PredictionMatrix) -> list[list[str]]:
    """Translate a lattice path of bitmasks over a sub-pool into predictor ids."""
    out = []
    for state in path:
        out.append([matrix.predictor_ids[pool[i]] for i in members(state)])
    return out


def run_experiment(
    matrix: PredictionMatrix,
    config: ExperimentConfig,
    split_spec: SplitSpec | None = None,
    jobs: int = 1,
    source: str = "matrix",
) -> dict:
    """Execute the full grid and return the report dict.

    Work units are (cell, epsilon, repetition) plus one baseline unit per
    repetition, each seeded independently from the master seed, so results
    do not depend on ``jobs``.  Cells whose strategy is unimplemented or
    whose runs raise a selection-domain error are flagged in place instead
    of failing the experiment.
    """
    if split_spec is None:
        split_spec = SplitSpec(seed=derive_seed(config.master_seed, "split"))
    n = matrix.n_predictors
    folds = split_spec.folds
    reps = config.repetitions

    fold_matrices = []
    fold_weights = []
    for f in range(folds):
        _, val_idx, test_idx = split(matrix, split_spec, f)
        val_m = matrix.subset_examples(val_idx)
        test_m = matrix.subset_examples(test_idx)
        fold_matrices.append((val_m, test_m))
        fold_weights.append(compute_weights(val_m))

    pools_by_rep = []
    for rep in range(reps):
        rng = make_rng(derive_seed(config.master_seed, "ordering", rep))
        pools_by_rep.append(grow_pool(np.arange(n), config.step, rng))
    pool_sizes = [len(p) for p in pools_by_rep[0]]
    n_points = len(pool_sizes)

    for k in config.checkpoints:
        if k not in pool_sizes:
            raise ReportError(
                f"checkpoint {k} is not among the measured pool sizes {pool_sizes}"
            )

    cells = _grid_cells(config)

    def run_cell_unit(cell: dict, epsilon: float, rep: int) -> dict:
        measure = strategy_config(cell["algorithm"]).measure
        unit_fmax = np.empty((n_points, folds))
        unit_size = np.empty((n_points, folds))
        unit_nonconv = np.zeros(n_points, dtype=int)
        example_run = None
        for point_i, pool in enumerate(pools_by_rep[rep]):
            pool_list = list(pool)
            for fold in range(folds):
                val_m, test_m = fold_matrices[fold]
                sub_val = val_m.subset_predictors(pool_list)
                sub_test = test_m.subset_predictors(pool_list)
                w = fold_weights[fold][pool_list]
                seed = derive_seed(
                    config.master_seed, "run", cell["label"], repr(epsilon),
                    rep, fold, len(pool),
                )
                lc = config.learning_config(epsilon, measure, cell["method"] or
                                            METHOD_DIVERSITY1, seed)
                result = select_ensemble(lc, sub_val, w)
                test_scores = combine(result.final_ensemble, sub_test, w, config.combine_rule)
                unit_fmax[point_i, fold] = fmax(test_scores, sub_test.labels).fmax
                unit_size[point_i, fold] = state_cardinality(result.final_ensemble)
                if not result.converged:
                    unit_nonconv[point_i] += 1
                if rep == 0 and fold == 0 and point_i == n_points - 1:
                    example_run = {
                        "rep": rep,
                        "fold": fold,
                        "pool_size": len(pool),
                        "converged": result.converged,
                        "episodes_run": result.episodes_run,
                        "validation_fmax": result.validation_fmax,
                        "final_members": _path_as_ids(
                            [result.final_ensemble], pool, matrix)[0],
                        "path": _path_as_ids(result.policy_path, pool, matrix),
                    }
        return {
            "fmax": unit_fmax.mean(axis=1),
            "size": unit_size.mean(axis=1),
            "non_converged": unit_nonconv,
            "example_run": example_run,
        }

    def run_baseline_unit(rep: int) -> dict:
        fe_fmax = np.empty((n_points, folds))
        fe_size = np.empty((n_points, folds))
        bb_fmax = np.empty((n_points, folds))
        for point_i, pool in enumerate(pools_by_rep[rep]):
            for fold in range(folds):
                val_m, test_m = fold_matrices[fold]
                w = fold_weights[fold]
                fe, size = full_ensemble_baseline(pool, test_m, w)
                fe_fmax[point_i, fold] = fe
                fe_size[point_i, fold] = size
                bb_fmax[point_i, fold] = best_base_baseline(pool, val_m, test_m, w)
        return {
            "fe_fmax": fe_fmax.mean(axis=1),
            "fe_size": fe_size.mean(axis=1),
            "bb_fmax": bb_fmax.mean(axis=1),
        }

    implemented = [c for c in cells if c["algorithm"] not in UNIMPLEMENTED_STRATEGIES]
    units = [("baseline", rep) for rep in range(reps)]
    units += [
        ("cell", ci, ei, rep)
        for ci in range(len(implemented))
        for ei in range(len(config.epsilons))
        for rep in range(reps)
    ]

    def run_unit(unit):
        if unit[0] == "baseline":
            return run_baseline_unit(unit[1])
        _, ci, ei, rep = unit
        return run_cell_unit(implemented[ci], config.epsilons[ei], rep)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool_exec:
            results = dict(zip(units, pool_exec.map(run_unit, units)))
    else:
        results = {unit: run_unit(unit) for unit in units}

    baseline_fe_fmax = np.stack([results[("baseline", r)]["fe_fmax"] for r in range(reps)], axis=1)
    baseline_fe_size = np.stack([results[("baseline", r)]["fe_size"] for r in range(reps)], axis=1)
    baseline_bb_fmax = np.stack([results[("baseline", r)]["bb_fmax"] for r in range(reps)], axis=1)
    fe_curve = _curve_dict(pool_sizes, baseline_fe_fmax, baseline_fe_size)
    bb_curve = _curve_dict(pool_sizes, baseline_bb_fmax, np.ones_like(baseline_bb_fmax))
    fe_mean_fmax = [p["mean_fmax"] for p in fe_curve["points"]]

    report_cells = []
    for cell in cells:
        entry = {
            "algorithm": cell["algorithm"],
            "method": cell["method"],
            "label": cell["label"],
        }
        if cell["algorithm"] in UNIMPLEMENTED_STRATEGIES:
            entry["status"] = "unimplemented"
            entry["error"] = f"strategy {cell['algorithm']} is a recognized slot but not implemented"
            report_cells.append(entry)
            continue
        ci = implemented.index(cell)
        try:
            by_epsilon = {}
            for ei, eps in enumerate(config.epsilons):
                rep_fmax = np.stack(
                    [results[("cell", ci, ei, r)]["fmax"] for r in range(reps)], axis=1)
                rep_size = np.stack(
                    [results[("cell", ci, ei, r)]["size"] for r in range(reps)], axis=1)
                nonconv = np.sum(
                    [results[("cell", ci, ei, r)]["non_converged"] for r in range(reps)], axis=0)
                curve = _curve_dict(pool_sizes, rep_fmax, rep_size, nonconv)
                eps_entry = {"epsilon": float(eps), "curve": curve}
                example = results[("cell", ci, ei, 0)]["example_run"]
                if example is not None:
                    eps_entry["example_run"] = example
                by_epsilon[str(eps)] = eps_entry
            best_eps = max(
                config.epsilons,
                key=lambda e: by_epsilon[str(e)]["curve"]["auesc"],
            )
            best_points = by_epsilon[str(best_eps)]["curve"]["points"]
            entry["status"] = "ok"
            entry["by_epsilon"] = by_epsilon
            entry["best_epsilon"] = float(best_eps)
            entry["parsimony"] = {
                str(k): v
                for k, v in parsimony_ratios(
                    [p["mean_size"] for p in best_points],
                    [p["mean_fmax"] for p in best_points],
                    pool_sizes,
                    fe_mean_fmax,
                    config.checkpoints,
                ).items()
            }
        except EnsembleSelectionError as exc:
            entry["status"] = "failed"
            entry["error"] = f"{type(exc).__name__}: {exc}"
        report_cells.append(entry)

    return {
        "schema_version": REPORT_SCHEMA_VERSION,
        "master_seed": int(config.master_seed),
        "source": source,
        "pool": {
            "n_predictors": int(n),
            "n_examples": int(matrix.n_examples),
            "positives": int(np.sum(matrix.labels)),
            "predictor_ids": list(matrix.predictor_ids),
        },
        "split": {
            "fractions": [float(f) for f in split_spec.fractions],
            "folds": int(split_spec.folds),
            "seed": int(split_spec.seed),
        },
        "protocol": {
            "step": int(config.step),
            "repetitions": int(reps),
            "checkpoints": [int(c) for c in config.checkpoints],
            "epsilons": [float(e) for e in config.epsilons],
            "methods": list(config.methods),
            "alpha": float(config.alpha),
            "gamma": float(config.gamma),
            "convergence_window": int(config.convergence_window),
            "max_episodes": int(config.max_episodes),
            "combine_rule": config.combine_rule,
            "binarize_threshold": float(config.binarize_threshold),
            "kappa_denominator": config.kappa_denominator,
        },
        "pool_sizes": [int(s) for s in pool_sizes],
        "cells": report_cells,
        "baselines": {
            "full_ensemble": fe_curve,
            "best_base": bb_curve,
        },
    }
