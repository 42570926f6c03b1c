"""Command-line front end: generate pools, run selections, inspect reports.

Exit status contract: 0 on success, 2 for usage, configuration, or input
validation problems, 1 for runtime failures.  Non-convergence of
individual selection runs is flagged in the report, not treated as a
failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import (
    RunConfig,
    canonical_report_json,
    load_report,
    load_run_config,
    synthetic_spec_from_dict,
    validate_schema,
)
from .core import PredictionMatrix
from .errors import (
    ConfigError,
    CurveError,
    EnsembleSelectionError,
    GenerationError,
    ReportError,
    SplitError,
    ValidationError,
)
from .generator import generate_pool
from .harness import run_experiment
from .matrix_io import read_matrix_csv, write_curve_csv, write_matrix_csv

VALID_QUERIES = "summary, parsimony, curve:<algorithm>, path, path:<algorithm>"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qensemble",
        description="Select parsimonious predictor ensembles by Q-learning "
        "over the subset lattice, and benchmark the selection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a synthetic prediction-matrix CSV")
    gen.add_argument("--config", required=True, metavar="SPEC.json",
                     help="synthetic pool spec")
    gen.add_argument("--out", required=True, metavar="POOL.csv", help="output CSV path")
    gen.add_argument("--seed", type=int, default=None, help="override the spec seed")

    sel = sub.add_parser("select", help="run the configured selection experiment")
    sel.add_argument("--config", required=True, metavar="RUN.json",
                     help="run configuration")
    sel.add_argument("--seed", type=int, default=None, help="override the master seed")
    sel.add_argument("--out", default=None, metavar="DIR",
                     help="override the output directory")
    sel.add_argument("--jobs", type=int, default=1,
                     help="concurrent work units (default 1)")

    ins = sub.add_parser("inspect", help="print slices of a report")
    ins.add_argument("report", metavar="REPORT.json")
    ins.add_argument("query", help=VALID_QUERIES)
    return parser


def cmd_generate(args) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON: {exc}") from None
    if args.seed is not None:
        data["seed"] = args.seed
    matrix = generate_pool(synthetic_spec_from_dict(data))
    write_matrix_csv(matrix, args.out)
    positives = int(matrix.labels.sum())
    print(
        f"wrote {args.out}: {matrix.n_predictors} predictors, "
        f"{matrix.n_examples} examples, {positives} positives "
        f"({positives / matrix.n_examples:.1%})"
    )
    return 0


def _load_input(config: RunConfig, config_path) -> tuple[PredictionMatrix, str]:
    if config.synthetic is not None:
        return generate_pool(config.synthetic), "synthetic"
    csv_path = Path(config.csv_path)
    if not csv_path.is_absolute():
        csv_path = Path(config_path).parent / csv_path
    return read_matrix_csv(csv_path), f"csv:{config.csv_path}"


def cmd_select(args) -> int:
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    config = load_run_config(args.config, seed_override=args.seed, out_override=args.out)
    matrix, source = _load_input(config, args.config)
    report = run_experiment(
        matrix, config.experiment, config.split, jobs=args.jobs, source=source
    )
    validate_schema(report, "report", ReportError)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / "report.json"
    report_path.write_text(canonical_report_json(report), encoding="utf-8")

    for cell in report["cells"]:
        if cell["status"] != "ok":
            print(f"{cell['label']}: {cell['status']} ({cell['error']})")
            continue
        best = cell["by_epsilon"][str(cell["best_epsilon"])]
        write_curve_csv(best["curve"]["points"], out_dir / f"curve_{cell['label']}.csv")
        non_converged = sum(
            p.get("non_converged_runs", 0) for p in best["curve"]["points"]
        )
        note = f", {non_converged} non-converged runs" if non_converged else ""
        print(
            f"{cell['label']}: best epsilon {cell['best_epsilon']}, "
            f"auESC {best['curve']['auesc']:.4f}{note}"
        )
    for name in ("full_ensemble", "best_base"):
        curve = report["baselines"][name]
        write_curve_csv(curve["points"], out_dir / f"curve_{name}.csv")
        print(f"{name}: auESC {curve['auesc']:.4f}")
    print(f"report: {report_path}")
    return 0


def _format_members(ids) -> str:
    return "{" + ",".join(ids) + "}"


def _inspect_summary(report: dict) -> None:
    pool = report["pool"]
    print(
        f"pool: {pool['n_predictors']} predictors, {pool['n_examples']} examples, "
        f"{pool['positives']} positives ({report['source']})"
    )
    print(f"pool sizes: {', '.join(str(s) for s in report['pool_sizes'])}")
    protocol = report["protocol"]
    print(f"repetitions: {protocol['repetitions']}, folds: {report['split']['folds']}")
    for name in ("full_ensemble", "best_base"):
        print(f"{name}: auESC {report['baselines'][name]['auesc']:.4f}")
    for cell in report["cells"]:
        if cell["status"] != "ok":
            print(f"{cell['label']} [{cell['status']}]")
        else:
            best = cell["by_epsilon"][str(cell["best_epsilon"])]
            print(
                f"{cell['label']} [ok] best epsilon {cell['best_epsilon']}, "
                f"auESC {best['curve']['auesc']:.4f}"
            )


def _inspect_parsimony(report: dict) -> None:
    checkpoints = report["protocol"]["checkpoints"]
    if not checkpoints:
        print("no checkpoints configured")
        return
    columns = ["algorithm"]
    for k in checkpoints:
        columns += [f"size_ratio@{k}", f"perf_ratio@{k}"]
    rows = [["full_ensemble"] + ["1.000", "1.000"] * len(checkpoints)]
    for cell in report["cells"]:
        if cell["status"] != "ok":
            rows.append([cell["label"]] + [cell["status"]] * (2 * len(checkpoints)))
            continue
        row = [cell["label"]]
        for k in checkpoints:
            entry = cell["parsimony"][str(k)]
            row += [f"{entry['size_ratio']:.3f}", f"{entry['perf_ratio']:.3f}"]
        rows.append(row)
    widths = [max(len(r[i]) for r in [columns] + rows) for i in range(len(columns))]
    for row in [columns] + rows:
        print("  ".join(field.ljust(width) for field, width in zip(row, widths)))


def _inspect_curve(report: dict, name: str) -> None:
    printed = False
    if name in report["baselines"]:
        curve = report["baselines"][name]
        print(f"# {name} auESC {curve['auesc']:.4f}")
        _print_curve_points(curve["points"])
        printed = True
    for cell in report["cells"]:
        if name not in (cell["algorithm"], cell["label"]) or cell["status"] != "ok":
            continue
        best = cell["by_epsilon"][str(cell["best_epsilon"])]
        print(
            f"# {cell['label']} best epsilon {cell['best_epsilon']} "
            f"auESC {best['curve']['auesc']:.4f}"
        )
        _print_curve_points(best["curve"]["points"])
        printed = True
    if not printed:
        known = [c["label"] for c in report["cells"] if c["status"] == "ok"]
        known += list(report["baselines"])
        raise ReportError(f"no curve for {name!r}; available: {', '.join(known)}")


def _print_curve_points(points) -> None:
    print("pool_size,mean_fmax,stderr,mean_size")
    for p in points:
        print(f"{p['pool_size']},{p['mean_fmax']!r},{p['stderr']!r},{p['mean_size']!r}")


def _inspect_path(report: dict, name: str | None) -> None:
    printed = False
    for cell in report["cells"]:
        if cell["status"] != "ok":
            continue
        if name is not None and name not in (cell["algorithm"], cell["label"]):
            continue
        run = cell["by_epsilon"][str(cell["best_epsilon"])].get("example_run")
        if run is None:
            continue
        state = "converged" if run["converged"] else "not converged"
        print(
            f"# {cell['label']} (rep {run['rep']}, fold {run['fold']}, "
            f"pool {run['pool_size']}, {state}, {run['episodes_run']} episodes)"
        )
        print(" -> ".join(_format_members(step) for step in run["path"]))
        print(
            f"final: {_format_members(run['final_members'])} "
            f"validation fmax {run['validation_fmax']:.4f}"
        )
        printed = True
    if not printed:
        raise ReportError(
            f"no policy path recorded for {name!r}" if name is not None
            else "no policy paths recorded"
        )


def cmd_inspect(args) -> int:
    report = load_report(args.report)
    query = args.query
    if query == "summary":
        _inspect_summary(report)
    elif query == "parsimony":
        _inspect_parsimony(report)
    elif query.startswith("curve:"):
        _inspect_curve(report, query[len("curve:"):])
    elif query == "path":
        _inspect_path(report, None)
    elif query.startswith("path:"):
        _inspect_path(report, query[len("path:"):])
    else:
        raise ReportError(f"unknown query {query!r}; valid queries: {VALID_QUERIES}")
    return 0


def entrypoint(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {"generate": cmd_generate, "select": cmd_select, "inspect": cmd_inspect}
    try:
        return handlers[args.command](args)
    except (ConfigError, ValidationError, GenerationError, SplitError,
            CurveError, ReportError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EnsembleSelectionError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(entrypoint())
