from typing import Optional


class BioTacError(Exception):
    """Base class for every error raised by ``biotac_sim``."""


class DatasetParseError(BioTacError, ValueError):
    """A dataset file could not be parsed.

    Attributes:
        row: 1-based data row where parsing failed (``None`` for header problems).
    """

    def __init__(self, message: str, row: Optional[int] = None):
        self.row = row
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)


class FoldSizingError(BioTacError, ValueError):
    """The dataset is too short for the requested fold plan."""


class InsufficientProbesError(BioTacError, ValueError):
    """Calibration received fewer probes than it needs."""


class DimensionMismatchError(BioTacError, ValueError):
    """An input vector does not have the width the model was trained with."""


class FitError(BioTacError, ValueError):
    """A model could not be fitted (e.g. empty training data)."""


class EmptyBenchmarkError(BioTacError, ValueError):
    """A latency benchmark was asked to time zero inputs."""


class TrainingDivergedError(BioTacError, RuntimeError):
    """Training produced a non-finite loss."""
