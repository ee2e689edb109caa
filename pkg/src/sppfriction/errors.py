"""Exception hierarchy.

Every error raised by the library derives from :class:`SppFrictionError` so
callers (the CLI in particular) can map families of failures to exit codes.
"""


class SppFrictionError(Exception):
    """Base class for all library errors."""


class DomainError(SppFrictionError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateInputError(DomainError):
    """Input for which the quasi-static formulas are undefined (e.g. v = 0)."""


class UndefinedEquilibriumError(DomainError):
    """Both transition rates vanish, so the stationary population is 0/0."""


class PreconditionError(DomainError):
    """A numerical control (grid, tolerance) does not meet its requirements."""


class CutoffError(PreconditionError):
    """A resonance line falls outside the k-space cutoff of a mode grid."""


class ConvergenceError(SppFrictionError, ArithmeticError):
    """An iterative numerical procedure failed to reach its tolerance."""

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class IntegrationError(ConvergenceError):
    """The ODE integrator could not advance (step size underflow)."""


class OptimizationError(SppFrictionError, ArithmeticError):
    """The objective is flat or its maximum is not bracketed."""
