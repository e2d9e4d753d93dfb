"""Exception hierarchy shared by every module.

Each class name doubles as the machine-readable error tag emitted by the CLI.
"""


class LinPPError(Exception):
    """Base class for domain errors."""

    @property
    def tag(self) -> str:
        return type(self).__name__


class NonPrime(LinPPError, ValueError):
    pass


class DegenerateDegree(LinPPError, ValueError):
    pass


class DivisionByZero(LinPPError, ZeroDivisionError):
    pass


class LevelMismatch(LinPPError, ValueError):
    pass


class NoSolution(LinPPError):
    pass


class BoundExceeded(LinPPError):
    pass


class BothZero(LinPPError, ValueError):
    pass


class NotCoprime(LinPPError, ValueError):
    pass


class DuplicateNode(LinPPError, ValueError):
    pass


class ZeroPolynomial(LinPPError, ValueError):
    pass


class NotADivisor(LinPPError, ValueError):
    pass


class NotARoot(LinPPError, ValueError):
    pass


class HypothesisViolated(LinPPError):
    pass


class PreconditionFailed(LinPPError):
    pass


class KNotUnitValued(LinPPError, ValueError):
    pass


class NotAPP(LinPPError):
    pass


class BaseNotPP(LinPPError, ValueError):
    pass


class BaseNotCPP(LinPPError, ValueError):
    pass


class HNotCoprime(LinPPError, ValueError):
    pass


class HConditionFailed(LinPPError, ValueError):
    pass


class InvalidA(LinPPError, ValueError):
    pass


class InvalidDelta(LinPPError, ValueError):
    pass


class SamplingFailed(LinPPError):
    pass
