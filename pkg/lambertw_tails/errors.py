"""Exception hierarchy shared by the services, the CLI and the HTTP routes."""

from typing import Optional, Sequence


class LambertWError(Exception):
    """Base error. `exit_code` is used by the CLI, `status_code` by the API."""

    exit_code = 2
    status_code = 422

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DomainError(LambertWError, ValueError):
    """Argument outside the domain of an operation."""

    def __init__(self, message: str, indices: Optional[Sequence[int]] = None):
        super().__init__(message)
        self.indices = list(indices) if indices is not None else []


class MomentRestrictionError(DomainError):
    """Mean-variance variant requested for an input without finite mean/variance."""


class DegenerateInputError(DomainError):
    """Constant data or too few distinct values."""


class InsufficientDataError(DomainError):
    """Too few points, an empty tail or an empty bootstrap cell."""


class InfiniteResultError(DomainError, OverflowError):
    """A forward transform overflowed to an infinite value."""


class ConvergenceError(LambertWError):
    """Lambert W root-finder did not reach its tolerance."""

    exit_code = 3
    status_code = 500


class DatasetError(LambertWError):
    """CSV ingestion failure."""

    status_code = 400

    def __init__(self, message: str, line: Optional[int] = None):
        super().__init__(message)
        self.line = line
