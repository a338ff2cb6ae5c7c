"""Exception types shared across the package."""


class AeplanError(Exception):
    """Base class for all package errors."""


class ShapeError(AeplanError):
    """Dimension mismatch detected before computing; a fatal configuration error."""


class ConfigError(AeplanError):
    """Invalid or missing configuration (CLI exit code 1)."""


class NonFiniteGradientError(AeplanError):
    """A gradient entry was NaN/inf; carries the offending parameter name."""

    def __init__(self, param_name: str):
        super().__init__(f"non-finite gradient entry in parameter '{param_name}'")
        self.param_name = param_name


class NonFiniteStateError(AeplanError):
    """A predicted state component was NaN/inf; carries the offending dimension."""

    def __init__(self, dim: int, step: int | None = None):
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"non-finite prediction in state dimension {dim}{where}")
        self.dim = dim
        self.step = step


class InsufficientHistoryError(AeplanError):
    """Not enough real history to fill uncertainty windows; supply warm-up steps."""


class NoAdmissiblePlanError(AeplanError):
    """Every sampled candidate violated the uncertainty constraint."""


class CheckpointError(AeplanError):
    """Base class for checkpoint file problems."""


class CheckpointVersionError(CheckpointError):
    """Unrecognized checkpoint magic/version line."""


class CheckpointTruncatedError(CheckpointError):
    """Checkpoint payload shorter than the header declares."""


class CheckpointKindError(CheckpointError):
    """Checkpoint holds a different network kind than requested."""

    def __init__(self, expected: str, found: str):
        super().__init__(
            f"checkpoint kind mismatch: expected '{expected}', file holds '{found}'"
        )
        self.expected = expected
        self.found = found
