"""Exception hierarchy shared across the package."""


class EnsembleSelectionError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(EnsembleSelectionError):
    """Malformed input data (scores out of range, mismatched lengths, ...)."""


class InvalidActionError(EnsembleSelectionError):
    """A lattice transition that is not allowed from the given state."""


class InvalidEnsembleError(EnsembleSelectionError):
    """An operation that requires a non-empty ensemble got the empty one."""


class UndefinedRecallError(EnsembleSelectionError):
    """Recall is undefined because the label vector has no positives."""


class DegenerateWeightsError(EnsembleSelectionError):
    """All member weights are zero, so the weighted average is undefined."""


class DegenerateVectorError(EnsembleSelectionError):
    """Zero-norm or zero-variance vector fed to a proximity measure."""


class UndefinedStatisticError(EnsembleSelectionError):
    """Agreement statistic with a zero denominator."""


class DiversityUndefinedError(EnsembleSelectionError):
    """No diversity signal exists (e.g. the current ensemble is empty)."""


class SplitError(EnsembleSelectionError):
    """Data set too small or fractions incompatible with the fold count."""


class CurveError(EnsembleSelectionError):
    """Curve with fewer than two points or non-increasing x values."""


class ReportError(EnsembleSelectionError):
    """Requested statistic cannot be computed from the measured results."""


class GenerationError(EnsembleSelectionError):
    """Synthetic pool specification is infeasible."""


class ConfigError(EnsembleSelectionError):
    """Run configuration failed schema validation."""
