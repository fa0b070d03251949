"""Exception hierarchy.

Every error raised on bad input derives from :class:`K3RMError`, which is a
``ValueError`` so callers that only care about "bad argument" can catch that.
"""

from __future__ import annotations


class K3RMError(ValueError):
    """Base class for all precondition failures in this package."""


# numfield
class NonSquarefree(K3RMError):
    pass


class Reducible(K3RMError):
    pass


class IrreducibilityUnverified(K3RMError):
    pass


class NotMonic(K3RMError):
    pass


class NotTotallyReal(K3RMError):
    pass


class SingularBasis(K3RMError):
    pass


class FactorizationLimit(K3RMError):
    def __init__(self, cofactor: int, bound: int):
        super().__init__(f"cofactor {cofactor} not factored below trial bound {bound}")
        self.cofactor = cofactor
        self.bound = bound


class FieldMismatch(K3RMError):
    pass


# quadform
class Degenerate(K3RMError):
    pass


class ShapeMismatch(K3RMError):
    pass


# rmhodge
class BadSignPattern(K3RMError):
    def __init__(self, k: int, embedding: int, message: str = ""):
        super().__init__(message or f"bad sign for a_{k} at embedding {embedding}")
        self.k = k
        self.embedding = embedding


class RankTooSmall(K3RMError):
    pass


class DegenerateTraceForm(K3RMError):
    pass


class NotSumOfTwoSquares(K3RMError):
    pass


class NotSquarefree(K3RMError):
    pass


class NoNegativePlane(K3RMError):
    pass


class ZeroElement(K3RMError):
    pass


class NotCompatible(K3RMError):
    pass


class InvalidStructure(K3RMError):
    pass


# cliffordks
class AlgebraMismatch(K3RMError):
    pass


class InvalidPeriod(K3RMError):
    pass


class NotOnCircle(K3RMError):
    pass


class NoValidSign(K3RMError):
    pass


class BadSeed(K3RMError):
    pass


# spinbranch
class RankMismatch(K3RMError):
    pass


class NotACharacter(K3RMError):
    pass


# cores
class NotQuadratic(K3RMError):
    pass


class NotQuadraticField(NotQuadratic):
    pass


class NotAssociative(K3RMError):
    pass


class VerificationFailed(K3RMError):
    pass


# zlattice
class GramMismatch(K3RMError):
    pass
