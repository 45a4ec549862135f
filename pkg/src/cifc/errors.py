"""Exception hierarchy shared across the package.

Error class names follow the contract vocabulary used throughout the
operation signatures (``NegativeProbability``, ``RowSumMismatch``, ...),
so callers can match on the same identifiers the docs use.
"""

from __future__ import annotations


class CifcError(Exception):
    """Base class for every error raised by this package."""


class NegativeProbability(CifcError):
    """A probability entry is below zero (beyond tolerance)."""


class RowSumMismatch(CifcError):
    """A conditional slice does not sum to one; carries the residual."""

    def __init__(self, message: str, residual: float = 0.0):
        super().__init__(message)
        self.residual = residual


class InvalidParameter(CifcError, ValueError):
    """A parameter is outside its documented domain."""


class SpecCoverageError(CifcError):
    """A factorization spec does not cover the declared variable set."""


class AlphabetMismatch(CifcError):
    """Variable cardinalities disagree between two objects being combined."""


class UnknownVariable(CifcError, KeyError):
    """A referenced random variable is not part of the distribution."""


class UnknownSchema(CifcError, KeyError):
    """The requested region schema id is not in the catalog."""


class FactorizationViolation(CifcError):
    """A distribution fails a conditional-independence requirement."""


class NotApplicable(CifcError):
    """The operation is defined only for a different schema."""


class Infeasible(CifcError):
    """The instantiated rate system admits no nonnegative solution."""


class Unbounded(CifcError):
    """The projected region escapes the guard box (transcription bug)."""


class IdentityViolation(CifcError):
    """A per-distribution algebraic identity failed; carries the seed."""

    def __init__(self, message: str, seed: int | None = None):
        super().__init__(message)
        self.seed = seed


class ContainmentViolation(CifcError):
    """A sampled region containment failed; carries seed and vertex."""

    def __init__(self, message: str, seed: int | None = None, vertex=None):
        super().__init__(message)
        self.seed = seed
        self.vertex = vertex
