"""Exception types shared across the package."""


class RevJudgeError(Exception):
    """Base class for all package errors."""


class PairParseError(RevJudgeError):
    """A record in a pair file could not be parsed. Carries the line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class PairSchemaError(RevJudgeError):
    """A record violates the pair-file schema (e.g. wrong label count)."""


class RejectedRecordError(RevJudgeError):
    """A record was rejected by an ingestion invariant (e.g. s1 == s2)."""


class MarkupError(RevJudgeError):
    """Unbalanced or malformed inline edit markup. Carries the sentence id."""

    def __init__(self, message, sid=None):
        if sid is not None:
            message = f"sentence {sid}: {message}"
        super().__init__(message)
        self.sid = sid


class UnsupportedStructureError(MarkupError):
    """Nested or overlapping edit spans, which the pair model cannot represent."""


class UndefinedKappaError(RevJudgeError):
    """Fleiss's kappa is undefined (expected agreement equals 1)."""


class CapacityError(RevJudgeError):
    """Not enough eligible items to satisfy a sampling request."""


class CannotOversampleError(RevJudgeError):
    """SMOTE needs at least two minority samples."""


class DegenerateTrainingError(RevJudgeError):
    """Training data contains a single class."""


class ConfigurationError(RevJudgeError):
    """A required data file, weight file, or version check failed."""


class SidecarLookupError(RevJudgeError):
    """A sentence is missing from the precomputed parse-statistics sidecar."""


class ProtocolError(RevJudgeError):
    """Cross-condition experiment protocol violation (fold plans, id overlap)."""
