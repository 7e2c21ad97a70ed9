class PopucError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(PopucError, ValueError):
    """An input lies outside the domain where a construction is defined."""


class ConvergenceError(PopucError, RuntimeError):
    """A root finder or iterative refinement failed to settle."""


class VerificationError(PopucError, AssertionError):
    """A numerically checked identity failed beyond its tolerance."""


class InputError(PopucError, ValueError):
    """A file or command-line value could not be parsed."""
