"""Exception types shared across the toolkit."""


class CrossClearError(Exception):
    """Base class for all toolkit-specific errors."""


class ParseError(CrossClearError, ValueError):
    """Malformed input file. Carries enough context to name the offender."""

    def __init__(self, message: str, *, source: str | None = None,
                 row: int | None = None, column: str | None = None):
        parts = [message]
        if source is not None:
            parts.append(f"file {source!r}")
        if row is not None:
            parts.append(f"row {row}")
        if column is not None:
            parts.append(f"column {column!r}")
        super().__init__(": ".join([parts[0], ", ".join(parts[1:])]) if len(parts) > 1 else message)
        self.source = source
        self.row = row
        self.column = column


class StationRangeError(CrossClearError, ValueError):
    """Requested station lies outside the profile extent."""


class VehicleFitError(CrossClearError, ValueError):
    """Profile is too short for the vehicle footprint (no extrapolation)."""


class TrainingDivergedError(CrossClearError, RuntimeError):
    """Loss became non-finite during training."""

    def __init__(self, epoch: int, message: str = ""):
        super().__init__(message or f"training diverged at epoch {epoch} (non-finite loss)")
        self.epoch = epoch


class CheckpointError(CrossClearError, ValueError):
    """Checkpoint file is malformed or does not match the model."""
