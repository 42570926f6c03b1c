"""Flat CSV serialization of prediction matrices.

Layout: header ``example_id,label,<predictor_id>,...`` followed by one row
per example.  Scores are written with repr so a read/write round trip is
value-exact, labels are 0/1, and rows are newline-terminated UTF-8.
Example ids are positional (``e0``, ``e1``, ...) and regenerated on write.
"""

from __future__ import annotations

import csv

import numpy as np

from .core import PredictionMatrix
from .errors import ValidationError

_FIXED_COLUMNS = ("example_id", "label")


def write_matrix_csv(matrix: PredictionMatrix, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(list(_FIXED_COLUMNS) + list(matrix.predictor_ids))
        for i in range(matrix.n_examples):
            row = [f"e{i}", str(int(matrix.labels[i]))]
            row += [repr(float(v)) for v in matrix.scores[:, i]]
            writer.writerow(row)


def read_matrix_csv(path) -> PredictionMatrix:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValidationError(f"{path}: empty file") from None
        if tuple(header[:2]) != _FIXED_COLUMNS:
            raise ValidationError(
                f"{path}: header must start with {','.join(_FIXED_COLUMNS)}, "
                f"got {','.join(header[:2])}"
            )
        predictor_ids = tuple(header[2:])
        if not predictor_ids:
            raise ValidationError(f"{path}: no predictor columns")
        labels = []
        columns = []
        for line_no, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise ValidationError(
                    f"{path}:{line_no}: expected {len(header)} fields, got {len(row)}"
                )
            if row[1] not in ("0", "1"):
                raise ValidationError(f"{path}:{line_no}: label must be 0 or 1, got {row[1]!r}")
            labels.append(int(row[1]))
            try:
                columns.append([float(v) for v in row[2:]])
            except ValueError as exc:
                raise ValidationError(f"{path}:{line_no}: {exc}") from None
    if not labels:
        raise ValidationError(f"{path}: no example rows")
    scores = np.asarray(columns, dtype=np.float64).T
    return PredictionMatrix(
        scores=scores,
        labels=np.asarray(labels, dtype=np.int64),
        predictor_ids=predictor_ids,
    )


def write_curve_csv(points, path) -> None:
    """Plot-ready curve rows: pool_size, mean_fmax, stderr, mean_size."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["pool_size", "mean_fmax", "stderr", "mean_size"])
        for p in points:
            writer.writerow(
                [p["pool_size"], repr(p["mean_fmax"]), repr(p["stderr"]), repr(p["mean_size"])]
            )
