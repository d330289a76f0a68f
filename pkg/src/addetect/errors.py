"""Exception types shared across the pipeline."""


class PipelineError(Exception):
    """Base class for errors raised by this package."""


class ChatParseError(PipelineError):
    """A .cha file violates the tier structure we rely on."""


class NormalizationError(PipelineError):
    """An annotation could not be interpreted (e.g. a bad repetition count)."""


class AlignmentError(PipelineError):
    """An alignment file is malformed or internally inconsistent."""


class AlignmentMismatchError(AlignmentError):
    """Aligned words diverge from the transcript words."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class ManifestError(PipelineError):
    """A dataset manifest fails validation."""


class FoldError(PipelineError):
    """Cross-validation folds cannot be built as requested."""


class ConfigError(PipelineError):
    """A run or sweep configuration is invalid or incomplete."""


class BackendError(PipelineError):
    """An encoder backend cannot satisfy the requested operation."""


class NumericError(PipelineError):
    """A score is non-finite where a finite value is required."""


class CoverageError(PipelineError):
    """Predictions do not cover the samples required for aggregation."""


class TrainingDivergedError(PipelineError):
    """Training produced a non-finite loss."""
