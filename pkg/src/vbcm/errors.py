"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):

* ``ValidationError`` -- the input is malformed (wrong shapes, bad lengths,
  an invalid band datum, ...).
* ``PreconditionError`` -- the input is well formed but violates a
  mathematical precondition (a singular gluing matrix, non-coprime
  rank/degree, ...).
"""


class VbcmError(Exception):
    pass


class ValidationError(VbcmError, ValueError):
    pass


class PreconditionError(VbcmError, ArithmeticError):
    pass


class NotSquare(ValidationError):
    pass


class NotInvertible(PreconditionError):
    pass


class RankMismatch(ValidationError):
    pass


class RankConditionViolated(PreconditionError):
    pass


class LengthNotMultiple(ValidationError):
    pass


class InvalidBandDatum(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class NotCoprime(PreconditionError):
    pass


class RangeViolation(PreconditionError):
    pass


class ZeroLambda(ValidationError):
    pass


class DuplicateLambda(ValidationError):
    pass


class SizeMismatch(ValidationError):
    pass


class GeneratorCountMismatch(ValidationError):
    pass


class MissingParameter(ValidationError):
    pass


class InadmissibleTransform(VbcmError):
    """Raised when a chain reduction step would break the weight constraints."""
