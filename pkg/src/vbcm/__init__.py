"""Exact computations with vector bundles on degenerations of elliptic
curves and with Cohen-Macaulay modules over surface singularities."""

from .errors import PreconditionError, ValidationError, VbcmError
from .field import GF, QQ, parse_field

__all__ = ["GF", "QQ", "parse_field", "VbcmError", "ValidationError", "PreconditionError"]
__version__ = "0.1.0"
