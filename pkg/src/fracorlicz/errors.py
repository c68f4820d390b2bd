"""Exception types shared across modules."""

__all__ = [
    "DomainError",
    "PreconditionError",
    "AdmissibilityError",
    "NoEmbeddingError",
    "InconclusiveError",
    "EvaluationError",
    "ProfileError",
]


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class PreconditionError(ValueError):
    """A gate condition needed by a construction fails; carries the report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class AdmissibilityError(ValueError):
    """Smoothness s >= n + 1: no nontrivial space of this kind exists."""


class NoEmbeddingError(PreconditionError):
    """A necessary gate condition diverges, so no embedding holds."""


class InconclusiveError(PreconditionError):
    """Numerical evidence did not settle a gate condition."""


class EvaluationError(ValueError):
    """A function is non-positive or non-finite where it must be positive."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ProfileError(ValueError):
    """A profile violates the shape a construction requires; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
