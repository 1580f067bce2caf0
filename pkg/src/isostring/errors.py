"""Exception hierarchy shared by every module."""


class IsostringError(Exception):
    """Base class for all library errors."""


class ValidationError(IsostringError, ValueError):
    pass


class OrderingViolation(ValidationError):
    """Positions are not strictly increasing inside (0, 1).

    When raised by the integrator, ``last_state`` holds the last accepted
    state and ``trajectory`` the samples recorded before breakdown.
    """

    def __init__(self, message, last_state=None, trajectory=None):
        super().__init__(message)
        self.last_state = last_state
        self.trajectory = trajectory if trajectory is not None else []


class NonPositiveMass(ValidationError):
    pass


class MassCollapse(OrderingViolation):
    """A mass reached zero or became negative during integration."""


class DegenerateBC(IsostringError):
    """Operation needs W(c0, c0_hat) != 0 but the ends are Neumann-Neumann."""


class DegenerateSpectrum(IsostringError):
    """A repeated root was found where only simple roots are possible."""


class PoleAtZ(IsostringError):
    pass


class BetaZero(IsostringError):
    pass


class NotAStieltjesFraction(IsostringError):
    """A continued-fraction coefficient came out non-positive."""


class LengthOverflow(IsostringError):
    pass


class DomainError(IsostringError, ValueError):
    pass
