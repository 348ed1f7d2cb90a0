"""Exception hierarchy shared by the Gaussian, Fock and witness layers."""


class CVLEAError(Exception):
    """Base class for all errors raised by :mod:`cvlea`."""


class InvalidChannel(CVLEAError, ValueError):
    """Noise below the complete-positivity limit ``mu >= |kappa - 1| / 2``."""


class DimensionMismatch(CVLEAError, ValueError):
    pass


class NonConvergence(CVLEAError, ArithmeticError):
    pass


class CutoffTooSmall(CVLEAError, ValueError):
    """The Fock cutoff cannot hold the requested state or channel output."""


class DegenerateState(CVLEAError, ValueError):
    pass


class DomainError(CVLEAError, ValueError):
    """A closed-form expression was evaluated outside its domain of validity."""
