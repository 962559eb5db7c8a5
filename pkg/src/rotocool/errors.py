"""Exception types shared across the package."""


class RotocoolError(Exception):
    """Base class for all package-specific errors."""


class InvalidParams(RotocoolError, ValueError):
    """System parameters outside their physical domain."""


class DomainError(RotocoolError, ValueError):
    """Function argument outside the mathematical domain."""


class DegenerateTransition(RotocoolError, ValueError):
    """Transition with zero energy gap between distinct levels."""


class QuadratureFailure(RotocoolError, RuntimeError):
    """Adaptive quadrature did not meet the requested tolerances."""


class StiffnessFailure(RotocoolError, RuntimeError):
    """Time propagation violated conservation or positivity bounds."""


class NonUniqueSteadyState(RotocoolError, RuntimeError):
    """Generator null space has dimension above one.

    Attributes
    ----------
    dimension : int
        Computed null-space dimension.
    """

    def __init__(self, dimension, message=None):
        self.dimension = int(dimension)
        if message is None:
            message = "steady state not unique: null-space dimension %d" % dimension
        super().__init__(message)
