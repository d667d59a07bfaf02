"""Exception types raised by the library.

Every error that signals invalid input or a broken invariant derives from
VilenkinError so callers can catch the whole family at once.  The CLI maps
these to exit code 2 (bad input) while numerical check failures map to
exit code 1.
"""

from __future__ import annotations


class VilenkinError(Exception):
    """Base class for all library errors."""


class SingularMatrixError(VilenkinError):
    """Dilation candidate has determinant zero."""


class UnitDeterminantError(VilenkinError):
    """Dilation candidate has |det| = 1, so the digit group is trivial."""


class NotExpandingError(VilenkinError):
    """Some eigenvalue of the dilation candidate has modulus <= 1."""


class WrongDigitCountError(VilenkinError):
    """A digit set does not contain exactly |det M| vectors."""


class MissingZeroDigitError(VilenkinError):
    """The first digit of a digit set is not the zero vector."""


class CongruentDigitsError(VilenkinError):
    """Two supplied digits fall in the same residue class."""

    def __init__(self, i: int, j: int, message: str | None = None):
        self.i = i
        self.j = j
        super().__init__(message or f"digits {i} and {j} are congruent modulo the dilation matrix")


class InternalInconsistencyError(VilenkinError):
    """A structural self-check failed while building group tables."""


class SideMismatchError(VilenkinError):
    """Operands live on different sides (group vs. dual group) or contexts."""


class ShapeIncompatibleError(VilenkinError):
    """A piecewise-constant function has an unusable (smoothness, support) shape."""


class CoarseningRequestedError(VilenkinError):
    """refine() was asked to decrease smoothness or support."""


class BadLengthError(VilenkinError):
    """An array length is not the required power of the digit count."""


class ZeroDigitUsedError(VilenkinError):
    """A xi entry is the zero digit."""

    def __init__(self, k: int, message: str | None = None):
        self.k = k
        super().__init__(message or f"xi entry {k} is the zero digit")


class WindowCollisionError(VilenkinError):
    """Two sliding windows of a xi sequence coincide."""

    def __init__(self, k: int, k2: int, message: str | None = None):
        self.k = k
        self.k2 = k2
        super().__init__(message or f"xi windows {k} and {k2} coincide")


class NotUnitNormError(VilenkinError):
    """Row supplied for unitary completion is not unit norm."""


class MaskNotOrthogonalError(VilenkinError):
    """Mask fails the per-tail column sum identity beyond tolerance."""


class OrderMismatchError(VilenkinError):
    """Masks of differing order combined into one family."""


class NonTerminatingProductError(VilenkinError):
    """Infinite-product evaluation did not stabilize at the truncation depth."""


class ConfigError(VilenkinError):
    """Configuration file is unreadable or a field fails validation.

    The message names the offending field (dotted path) or carries the
    parser's line diagnostics.
    """
