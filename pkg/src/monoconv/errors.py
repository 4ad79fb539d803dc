"""Exception classes shared across the package."""


class DomainError(ValueError):
    """A mathematical precondition was violated (bad argument domain)."""


class StepSizeUnderflowError(RuntimeError):
    """The adaptive ODE integrator could not meet the tolerance without the
    step size collapsing below machine resolution."""


class SupercriticalOverflowError(RuntimeError):
    """A simulated branching population exceeded the hard cap."""
