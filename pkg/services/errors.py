"""Exception hierarchy for the exact T-bar toolkit."""
from __future__ import annotations


class TBarError(ValueError):
    """Raised when an input or a construction is invalid. Message is user-safe."""

    def __init__(self, message: str, status_code: int = 400):
        super().__init__(message)
        self.status_code = status_code


class DyadicError(TBarError):
    """Malformed dyadic rational text or an invalid exponent."""


class PLMapError(TBarError):
    """A piecewise-linear map violates the Thompson conditions or interval bookkeeping."""


class ElementError(TBarError):
    """A fundamental-domain table does not describe an element of T-bar."""


class RootError(TBarError):
    """Root extraction preconditions failed."""


class WordError(TBarError):
    """Bad word syntax or an unsupported word construction."""


class ChainError(TBarError):
    """Invalid chain request."""
