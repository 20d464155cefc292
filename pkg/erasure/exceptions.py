"""
Errors raised by the erasure library.

Everything derives from ``ErasureChiError`` so callers (and the management
commands) can catch library failures in one place.
"""
from typing import Any, Optional


class ErasureChiError(Exception):
    """Base class for every error raised by the library."""


class NonHermitianInput(ErasureChiError):
    pass


class ConvergenceFailure(ErasureChiError):
    pass


class DomainError(ErasureChiError):
    """A scalar map is undefined on some eigenvalue, or an argument is out of range."""


class DimensionMismatch(ErasureChiError):
    pass


class InvalidRank(ErasureChiError):
    pass


class InvalidDistribution(ErasureChiError):
    pass


class RankDeficientBath(ErasureChiError):
    """The bath state has a zero eigenvalue, so its logarithm is singular."""


class InternalInconsistency(ErasureChiError):
    """Two computations that must agree did not."""


class InvalidPOVM(ErasureChiError):
    pass


class SupportError(ErasureChiError):
    pass


class NotConverged(ErasureChiError):
    """
    The capacity iteration hit its budget. ``result`` holds the best iterate.
    """
    def __init__(self, message: str, result: Any):
        super().__init__(message)
        self.result = result


class ParseError(ErasureChiError):
    """The input is not a well-formed ensemble document."""
    def __init__(self, message: str, location: Optional[str] = None):
        super().__init__(f'{location}: {message}' if location else message)
        self.location = location


class ValidationError(ErasureChiError):
    """The input is well-formed but violates a named invariant."""
    def __init__(self, invariant: str, message: str = ''):
        super().__init__(f'{invariant}: {message}' if message else invariant)
        self.invariant = invariant
