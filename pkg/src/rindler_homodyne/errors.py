"""Exception types raised across the package."""


class RindlerHomodyneError(Exception):
    """Base class for all package errors."""


class DomainError(RindlerHomodyneError, ValueError):
    """An argument lies outside the domain of a function (e.g. a non-positive frequency)."""


class ValidityWindowError(RindlerHomodyneError, ValueError):
    """Wavepacket parameters lie outside the window where the model is trusted."""


class NonConvergenceError(RindlerHomodyneError, ArithmeticError):
    """Quadrature did not reach the requested tolerance."""


class UnsupportedScenarioError(RindlerHomodyneError, ValueError):
    """The requested operation is not defined for this scenario."""
