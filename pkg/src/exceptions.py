"""
FrozenTime - Exceptions

Error types shared by all modules. The CLI and the API translate them into
exit codes and HTTP status codes.
"""

from typing import Optional


class FrozenTimeError(Exception):
    """Base class for all FrozenTime errors."""


class DomainError(FrozenTimeError, ValueError):
    """A pre-condition on numeric arguments is violated (t1 > t2, sigma >= sigma0, ...)."""


class InputError(FrozenTimeError, ValueError):
    """Malformed or non-finite input data."""


class DimensionError(InputError):
    """Signal and system dimensions do not match."""


class UnclassifiableError(FrozenTimeError):
    """The frozen closed loop has no computable companion form."""


class InapplicableCertificateError(FrozenTimeError):
    """The selected certificate variant does not apply to this schedule."""


class InfeasibleSequenceError(FrozenTimeError):
    """No admissible time sequence exists within the allowed window length."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index
