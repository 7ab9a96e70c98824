"""Exception hierarchy.

Every error belongs to one family; the CLI maps families to exit codes.
"""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""

    exit_code = 1


class VerificationFailure(WorkbenchError):
    exit_code = 2


class ParseError(WorkbenchError):
    exit_code = 3

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class DimensionMismatch(WorkbenchError):
    exit_code = 4


class Unbounded(WorkbenchError):
    exit_code = 5


class RecoveryError(WorkbenchError):
    exit_code = 6


class InvalidInput(WorkbenchError):
    """Precondition violated by otherwise well-formed data."""

    exit_code = 7


# verification family
class ParityViolation(VerificationFailure):
    pass


class NotInCone(VerificationFailure):
    def __init__(self, which, point, functional):
        self.which = which
        self.point = point
        self.functional = functional
        super().__init__(f"{which} = {list(map(str, point))} is not in the cone")


# recovery family
class InsufficientMoments(RecoveryError):
    pass


class NonIntegerRoot(RecoveryError):
    pass


class NonIntegerCoordinate(RecoveryError):
    pass


class AmbiguousRecovery(RecoveryError):
    pass


class BoundExceeded(RecoveryError):
    pass


# invalid-input family
class NegativeOrder(InvalidInput):
    pass


class InsufficientData(InvalidInput):
    pass


class DegreeMismatch(InvalidInput):
    pass


class Collision(InvalidInput):
    pass


class EmptyStructure(InvalidInput):
    pass


class NegativeSelfIntersection(InvalidInput):
    pass


class InvalidSectionData(InvalidInput):
    pass


class SingularBasis(InvalidInput):
    pass


class TruncationTooShallow(InvalidInput):
    pass


class WrongArity(InvalidInput):
    pass


class DegenerateRestriction(InvalidInput):
    pass
