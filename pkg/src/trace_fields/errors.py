"""
Structured domain errors for Trace Fields.

Every error carries a machine-readable ``tag`` (the class name) and a
``details`` mapping of JSON-friendly values. Reports and CLI exit codes are
derived from these.
"""

from typing import Any


class TraceFieldError(Exception):
    """Base class for all domain errors."""

    tag: str = "TraceFieldError"

    def __init_subclass__(cls, **kwargs: Any) -> None:
        super().__init_subclass__(**kwargs)
        cls.tag = cls.__name__

    def __init__(self, message: str = "", **details: Any) -> None:
        self.message = message or self.tag
        self.details = details
        super().__init__(self.message)

    def to_dict(self) -> dict[str, Any]:
        return {"tag": self.tag, "message": self.message, "details": self.details}

    def __str__(self) -> str:
        if not self.details:
            return self.message
        extra = ", ".join(f"{key}={value}" for key, value in self.details.items())
        return f"{self.message} ({extra})"


class InvalidParameter(TraceFieldError):
    """A caller supplied a value outside an operation's domain."""


class NotInGroup(TraceFieldError):
    """Matrix fails the SU(2,1) row conditions or det = 1 beyond eps_form."""


class DegenerateSample(TraceFieldError):
    """Random construction hit a degenerate frame too many times."""


class BoundaryCase(TraceFieldError):
    """Deciding quantity lies within tolerance of a classification threshold."""


class NotLoxodromic(TraceFieldError):
    pass


class InconsistentSpectrum(TraceFieldError):
    """Eigenvalues do not follow the lambda e^{i phi}, e^{-2 i phi} pattern."""


class FrameDegenerate(TraceFieldError):
    """Eigenframe is numerically dependent (near-parabolic input)."""


class NotParabolic(TraceFieldError):
    pass


class OutOfRange(TraceFieldError):
    """Recovered cosine outside [-1, 1]: inconsistent (trace, lambda) pair."""


class DenominatorUnderflow(TraceFieldError):
    pass


class IllConditioned(TraceFieldError):
    """A linear system or certificate residual is beyond the accepted bounds."""


class Reducible(TraceFieldError):
    """The group has a common invariant complex line."""


class BasisNotFound(TraceFieldError):
    """Word enumeration exhausted before nine independent words were found."""


class NoLoxodromicFound(TraceFieldError):
    pass


class TraceFieldNotReal(TraceFieldError):
    pass


class NotUnimodular(TraceFieldError):
    """ad - bc differs from 1 beyond eps_form."""
