"""Exception types raised by the library.

Every input-validation error derives from :class:`StateError`, which is a
``ValueError``; the CLI maps it to exit code 2 and prints the class name.
"""


class StateError(ValueError):
    """Base class for invalid inputs."""


class NotHermitian(StateError):
    pass


class TraceNotOne(StateError):
    pass


class NotPSD(StateError):
    pass


class NotNormalized(StateError):
    pass


class BadShape(StateError):
    pass


class BadSign(StateError):
    pass


class BadProbability(StateError):
    pass


class BadRank(StateError):
    pass


class NotARotation(StateError):
    pass


class OutOfRange(StateError):
    pass


class BadResolution(StateError):
    pass


class DegenerateTheta(StateError):
    pass


class ZeroCorrelation(StateError):
    """The correlation matrix vanishes, so no optimal operator is singled out."""


class NumericalFailure(ArithmeticError):
    """A numerical routine produced non-finite or inconsistent output."""


class BadFormat(StateError):
    """A state file does not follow the JSON state format."""
