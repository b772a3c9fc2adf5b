"""Exception hierarchy shared by all modules."""


class EigenboundError(Exception):
    """Base class for every error raised by this package."""


class DomainError(EigenboundError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class InfeasibleVolumeError(DomainError):
    """A requested volume cannot be enclosed by a ball of the given space form."""


class SolverError(EigenboundError, RuntimeError):
    """A numerical solver failed to produce an answer."""


class IntegrationError(SolverError):
    """The ODE integrator could not advance (step size underflow)."""


class BracketError(SolverError):
    """No sign change was found while bracketing an eigenvalue."""


class ConvergenceError(SolverError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
