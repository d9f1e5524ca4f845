"""Exception hierarchy shared by all coeig modules."""


class CoeigError(Exception):
    """Base class for all errors raised by this package."""


class InputError(CoeigError, ValueError):
    """Invalid input data or a violated caller-side precondition."""


class DependentGeneratorsError(InputError):
    """Generator set passed to the Lie-closure builder is linearly dependent."""

    def __init__(self, message, dependent_indices=()):
        super().__init__(message)
        self.dependent_indices = list(dependent_indices)


class RefusedInstanceError(InputError):
    """Instance exceeds a hard resource guard and is refused outright."""


class NumericalFailureError(CoeigError):
    """A residual verification or an iterative solver failed.

    Carries a ``diagnostics`` dict with the measured quantities so callers
    can report what went wrong instead of silently accepting a bad answer.
    """

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class NonInvariantSubspaceError(NumericalFailureError):
    """Restriction was requested onto a subspace the matrix does not preserve."""
