"""Parsimonious ensemble selection by Q-learning over the subset lattice.

The package takes a pool of base-predictor score vectors, learns which
subsets combine well under a performance-weighted average, and returns a
small ensemble whose validation F-max competes with the full pool.
Exploration can be directed toward maximally diverse candidate ensembles
using either unsupervised vector measures or supervised agreement
statistics.  A benchmarking harness grows pools in random order, scores
selections across folds and repetitions, and emits deterministic reports.
"""

from .combiner import (
    COMBINE_RULES,
    RunningAggregate,
    combine,
    compute_weights,
    empty_aggregate,
    extend_aggregate,
)
from .config import (
    RunConfig,
    canonical_report_json,
    load_report,
    load_run_config,
    load_schema,
    synthetic_spec_from_dict,
    validate_schema,
)
from .core import (
    START,
    PredictionMatrix,
    available_actions,
    derive_seed,
    ensemble_add,
    finish_state,
    format_state,
    make_rng,
    members,
    state_cardinality,
    state_from_members,
    successors,
)
from .diversity import (
    DIVERSITY_MEASURES,
    DIVERSITY_METHODS,
    KAPPA_AS_PRINTED,
    KAPPA_DENOMINATORS,
    KAPPA_STANDARD,
    METHOD_DIVERSITY1,
    METHOD_DIVERSITY2,
    ContingencyTable,
    contingency,
    correlation_diversity,
    cosine_diversity,
    euclidean_diversity,
    kappa_diversity,
    measure_vectors,
    pair_diversity,
    yule_q_diversity,
)
from .errors import (
    ConfigError,
    CurveError,
    DegenerateVectorError,
    DegenerateWeightsError,
    DiversityUndefinedError,
    EnsembleSelectionError,
    GenerationError,
    InvalidActionError,
    InvalidEnsembleError,
    ReportError,
    SplitError,
    UndefinedRecallError,
    UndefinedStatisticError,
    ValidationError,
)
from .generator import SyntheticPoolSpec, generate_pool
from .harness import (
    DEFAULT_EPSILONS,
    REPORT_SCHEMA_VERSION,
    ExperimentConfig,
    SplitSpec,
    auesc,
    best_base_baseline,
    full_ensemble_baseline,
    grow_pool,
    parsimony_ratios,
    run_experiment,
    split,
)
from .matrix_io import read_matrix_csv, write_curve_csv, write_matrix_csv
from .metrics import FMaxResult, f_measure, fmax, precision_recall
from .rl import (
    DIVERSITY_STRATEGY_PREFIX,
    IMPLEMENTED_STRATEGIES,
    KNOWN_STRATEGIES,
    STRATEGY_GREEDY,
    UNIMPLEMENTED_STRATEGIES,
    EpisodeTrace,
    LearningConfig,
    QTable,
    SelectionResult,
    choose_action,
    greedy_policy_path,
    q_update,
    reward,
    run_episode,
    select_ensemble,
    strategy_config,
)

__version__ = "0.1.0"

__all__ = [
    "COMBINE_RULES",
    "ConfigError",
    "ContingencyTable",
    "CurveError",
    "DEFAULT_EPSILONS",
    "DIVERSITY_MEASURES",
    "DIVERSITY_METHODS",
    "DIVERSITY_STRATEGY_PREFIX",
    "DegenerateVectorError",
    "DegenerateWeightsError",
    "DiversityUndefinedError",
    "EnsembleSelectionError",
    "EpisodeTrace",
    "ExperimentConfig",
    "FMaxResult",
    "GenerationError",
    "IMPLEMENTED_STRATEGIES",
    "InvalidActionError",
    "InvalidEnsembleError",
    "KAPPA_AS_PRINTED",
    "KAPPA_DENOMINATORS",
    "KAPPA_STANDARD",
    "KNOWN_STRATEGIES",
    "LearningConfig",
    "METHOD_DIVERSITY1",
    "METHOD_DIVERSITY2",
    "PredictionMatrix",
    "QTable",
    "REPORT_SCHEMA_VERSION",
    "ReportError",
    "RunConfig",
    "RunningAggregate",
    "START",
    "STRATEGY_GREEDY",
    "SelectionResult",
    "SplitError",
    "SplitSpec",
    "SyntheticPoolSpec",
    "UNIMPLEMENTED_STRATEGIES",
    "UndefinedRecallError",
    "UndefinedStatisticError",
    "ValidationError",
    "auesc",
    "available_actions",
    "best_base_baseline",
    "canonical_report_json",
    "choose_action",
    "combine",
    "compute_weights",
    "contingency",
    "correlation_diversity",
    "cosine_diversity",
    "derive_seed",
    "empty_aggregate",
    "ensemble_add",
    "euclidean_diversity",
    "extend_aggregate",
    "f_measure",
    "finish_state",
    "fmax",
    "format_state",
    "full_ensemble_baseline",
    "generate_pool",
    "greedy_policy_path",
    "grow_pool",
    "kappa_diversity",
    "load_report",
    "load_run_config",
    "load_schema",
    "make_rng",
    "measure_vectors",
    "members",
    "pair_diversity",
    "parsimony_ratios",
    "precision_recall",
    "q_update",
    "read_matrix_csv",
    "reward",
    "run_episode",
    "run_experiment",
    "select_ensemble",
    "split",
    "state_cardinality",
    "state_from_members",
    "strategy_config",
    "successors",
    "synthetic_spec_from_dict",
    "validate_schema",
    "write_curve_csv",
    "write_matrix_csv",
    "yule_q_diversity",
]
