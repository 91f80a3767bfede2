"""Exception hierarchy shared by all unidisc modules."""

from __future__ import annotations


class UnidiscError(Exception):
    """Base class for numerical failures raised by this package."""


class DomainError(UnidiscError, ValueError):
    """A parameter or argument lies outside the supported domain."""


class TruncationError(UnidiscError):
    """A series did not reach its tolerance within ``max_terms`` terms.

    The best partial sum and the tail estimate at the point of giving up are
    kept on the exception so callers can still inspect them.
    """

    def __init__(self, message: str, value: complex, error_bound: float, terms_used: int):
        super().__init__(message)
        self.value = value
        self.error_bound = error_bound
        self.terms_used = terms_used


class QuadratureError(UnidiscError):
    """Adaptive quadrature hit its depth limit without meeting the tolerance."""

    def __init__(self, message: str, estimate: float, error_estimate: float):
        super().__init__(message)
        self.estimate = estimate
        self.error_estimate = error_estimate


class ScanExhaustedError(UnidiscError):
    """Fewer sign changes than requested zeros were found in the scan range."""


class ConsistencyError(UnidiscError):
    """A localization or interlacing property failed, usually a missed zero."""


class CriterionInapplicableError(UnidiscError):
    """The zero-sum criterion needs every zero above 1 and one was not."""


class NearPoleError(UnidiscError):
    """A closed form was evaluated too close to a zero of its denominator."""


class BracketError(UnidiscError):
    """A root bracket did not contain exactly one sign change."""


class UnsupportedError(UnidiscError):
    """The requested family/mode combination is not provided."""


class InsufficientNError(UnidiscError):
    """Tail bounds were too wide to decide; retry with more zeros."""


class DegenerateProbeError(UnidiscError):
    """Every grid point of a disk probe was skipped."""
