"""Exception hierarchy for llcalloc.

Every error carries the process exit code the CLI maps it to:
    2  configuration / validation error
    3  missing upstream artifact
    4  training divergence
    5  artifact I/O error
"""

from typing import Any, List, Optional


class LlcAllocError(Exception):
    """Base class for all llcalloc errors."""

    exit_code = 1


class ValidationError(LlcAllocError, ValueError):
    """A value violates a domain invariant."""

    exit_code = 2


class ConstraintViolationError(ValidationError):
    """An allocation breaks the cache-way constraints."""


class InfeasibleError(ValidationError):
    """No allocation can satisfy the requested shape."""


class ParameterizationError(ValidationError):
    """Oracle parameters produce a non-physical compute value."""


class ConfigError(ValidationError):
    """Run configuration failed validation."""

    def __init__(self, errors: List[str]):
        self.errors = list(errors)
        super().__init__("Invalid configuration: " + "; ".join(self.errors))


class NumericError(LlcAllocError, ArithmeticError):
    """NaN or Inf appeared in a forward pass."""

    def __init__(self, message: str, layer_index: Optional[int] = None):
        self.layer_index = layer_index
        super().__init__(message)


class TrainingDivergedError(NumericError):
    """Validation loss became NaN during training."""

    exit_code = 4

    def __init__(self, message: str, history: Optional[List[Any]] = None):
        super().__init__(message)
        self.history = list(history or [])


class ModelSpaceMismatchError(LlcAllocError):
    """A classifier does not match the allocation space it is used with."""


class MissingArtifactError(LlcAllocError):
    """An upstream artifact has not been produced yet."""

    exit_code = 3

    def __init__(self, artifact: str, producer: str):
        self.artifact = artifact
        self.producer = producer
        super().__init__(f"Missing artifact '{artifact}': run {producer} first")


class ArtifactIOError(LlcAllocError):
    """An artifact could not be read or written."""

    exit_code = 5


class ReportParseError(ArtifactIOError):
    """A benchmark report file is malformed."""

    def __init__(self, message: str, line_number: int):
        self.line_number = line_number
        super().__init__(f"line {line_number}: {message}")


class StageError(LlcAllocError):
    """A pipeline stage failed; wraps the original error."""

    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 1)
        super().__init__(f"[{stage}] {cause}")
