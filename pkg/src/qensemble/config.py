"""Declarative run configuration and report file handling.

A run configuration is a JSON document naming the input (a prediction
matrix CSV or a synthetic pool spec), the split layout, the algorithm
grid, learning parameters, and the master seed.  Every document is
validated against the schemas shipped with the package before any
computation starts, and reports are serialized canonically (sorted keys,
fixed indentation, no timestamps) so identical runs produce identical
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

import jsonschema

from .core import derive_seed
from .diversity import METHOD_DIVERSITY1
from .errors import ConfigError, ReportError
from .generator import SyntheticPoolSpec
from .harness import DEFAULT_EPSILONS, ExperimentConfig, SplitSpec


def load_schema(name: str) -> dict:
    """Load a packaged schema by stem name ("config", "pool", "report")."""
    path = resources.files("qensemble.schemas").joinpath(f"{name}.schema.json")
    return json.loads(path.read_text(encoding="utf-8"))


def validate_schema(instance, schema_name: str, error_cls=ConfigError) -> None:
    """Check a document against a packaged schema; raise error_cls if off."""
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    error = jsonschema.exceptions.best_match(validator.iter_errors(instance))
    if error is not None:
        where = "/".join(str(p) for p in error.absolute_path) or "document root"
        raise error_cls(f"{schema_name} schema violation at {where}: {error.message}")


def _load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON: {exc}") from None


def synthetic_spec_from_dict(data: dict) -> SyntheticPoolSpec:
    validate_schema(data, "pool")
    kwargs = dict(data)
    if "accuracy_range" in kwargs:
        kwargs["accuracy_range"] = tuple(kwargs["accuracy_range"])
    return SyntheticPoolSpec(**kwargs)


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved experiment description ready to execute."""

    csv_path: str | None
    synthetic: SyntheticPoolSpec | None
    split: SplitSpec
    experiment: ExperimentConfig
    out_dir: str


def load_run_config(path, seed_override=None, out_override=None) -> RunConfig:
    """Parse and validate a run-configuration file.

    ``seed_override`` replaces the file's master seed before any derived
    seed is computed; ``out_override`` replaces the output directory.
    """
    data = _load_json(path)
    validate_schema(data, "config")
    master = int(seed_override) if seed_override is not None else int(data["seed"])

    input_block = data["input"]
    csv_path = input_block.get("csv")
    synthetic = None
    if "synthetic" in input_block:
        syn = dict(input_block["synthetic"])
        syn.setdefault("seed", derive_seed(master, "pool"))
        synthetic = synthetic_spec_from_dict(syn)

    split_block = data.get("split", {})
    split = SplitSpec(
        fractions=tuple(split_block.get("fractions", (0.6, 0.2, 0.2))),
        folds=int(split_block.get("folds", 5)),
        seed=derive_seed(master, "split"),
    )

    learning = data.get("learning", {})
    experiment = ExperimentConfig(
        algorithms=tuple(data["algorithms"]),
        methods=tuple(data.get("methods", (METHOD_DIVERSITY1,))),
        epsilons=tuple(data.get("epsilons", DEFAULT_EPSILONS)),
        step=int(data.get("step", 10)),
        repetitions=int(data.get("repetitions", 10)),
        checkpoints=tuple(data.get("checkpoints", ())),
        alpha=float(learning.get("alpha", 0.1)),
        gamma=float(learning.get("gamma", 0.9)),
        convergence_window=int(learning.get("convergence_window", 10)),
        max_episodes=int(learning.get("max_episodes", 1000)),
        combine_rule=data.get("combine_rule", "weighted"),
        binarize_threshold=float(data.get("binarize_threshold", 0.5)),
        kappa_denominator=data.get("kappa_denominator", "standard"),
        master_seed=master,
    )
    out_dir = out_override if out_override is not None else data.get("out_dir", "results")
    return RunConfig(
        csv_path=csv_path,
        synthetic=synthetic,
        split=split,
        experiment=experiment,
        out_dir=str(out_dir),
    )


def canonical_report_json(report: dict) -> str:
    """Canonical byte form of a report: sorted keys, two-space indent."""
    return json.dumps(report, sort_keys=True, indent=2, allow_nan=False) + "\n"


def load_report(path) -> dict:
    report = _load_json(path)
    validate_schema(report, "report", ReportError)
    return report
