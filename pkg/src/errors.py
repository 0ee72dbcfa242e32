"""
Berlab Errors

Exception hierarchy shared by the models, services and commands.
"""


class BerlabError(Exception):
    """Base class for every error raised by berlab."""


class NotHermitian(BerlabError):
    """A matrix that must be Hermitian is not."""


class NotPSD(BerlabError):
    """A matrix that must be positive semidefinite has a negative eigenvalue."""


class ZeroKernelPoint(BerlabError):
    """A Gram diagonal entry is (numerically) zero."""


class PointOutsideDisc(BerlabError):
    """A disc-kernel point lies too close to (or beyond) the unit circle."""


class DuplicatePoint(BerlabError):
    """Two kernel points coincide."""


class PointTooLarge(BerlabError):
    """A Fock-kernel point exceeds the conditioning bound."""


class IndexOutOfRange(BerlabError):
    """A kernel index is outside 0..m-1."""


class DimensionMismatch(BerlabError):
    """Operator and space dimensions disagree."""


class MissingSecondOperand(BerlabError):
    """A two-operator bound was evaluated without B."""


class NotNormal(BerlabError):
    """A bound restricted to normal operators received a non-normal one."""


class NotOrthogonalPair(BerlabError):
    """Re<A k, B k> does not vanish on every kernel point."""


class UnknownBoundId(BerlabError):
    """The bound id is not in the registry."""


class UnknownFixture(BerlabError):
    """The fixture name is not known."""


class FixtureMismatch(BerlabError):
    """A fixture replay produced a value different from the expected one."""


class ConfigError(BerlabError):
    """Invalid suite or optimizer configuration."""


class SpecFileError(BerlabError):
    """A space or operator file could not be read or is malformed."""


class NonFiniteEntries(BerlabError):
    """A matrix contains NaN or infinite entries."""
