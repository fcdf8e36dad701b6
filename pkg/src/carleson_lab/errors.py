"""Exception taxonomy shared by all modules.

Callers can rely on the split: ``ConfigError``/``InputError`` mean the request
was malformed (CLI exit code 1), the remaining kinds mean the computation
itself gave up (CLI exit code 2).
"""

from __future__ import annotations


class CarlesonLabError(Exception):
    """Base class for all library errors."""


class InputError(CarlesonLabError):
    """A point, vector or measure violates a documented precondition."""


class ConfigError(CarlesonLabError):
    """Malformed configuration: bad ranges, unknown keys, missing files."""


class NumericError(CarlesonLabError):
    """An iterative routine failed to converge or lost a bracket.

    ``payload`` carries diagnostic values (brackets, residuals) for reports.
    """

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = dict(payload or {})


class TruncationError(NumericError):
    """A series tail bound exceeds the requested tolerance."""


class CapabilityError(CarlesonLabError):
    """The requested operation is not available for this domain or model."""


class ResourceError(CarlesonLabError):
    """A search exhausted its budget (candidate points, refinement levels)."""
