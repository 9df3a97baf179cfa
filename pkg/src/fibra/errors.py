from __future__ import annotations

from typing import Any, Dict, Optional


class FibraError(Exception):
    """Base class for every error raised by fibra."""

    def __init__(self, message: str, *, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details: Dict[str, Any] = dict(details or {})

    @property
    def kind(self) -> str:
        return type(self).__name__

    def to_dict(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"error": self.kind, "message": self.message}
        if self.details:
            out["details"] = self.details
        return out


# Input errors: the CLI exits with status 2.


class InputError(FibraError):
    pass


class ParseError(InputError):
    pass


class SchemaError(InputError):
    pass


class DegreeOverflow(InputError):
    pass


class UnsupportedDegree(InputError):
    pass


class ReduciblePolynomial(InputError):
    pass


class UnknownTheorem(InputError):
    pass


class MissingInput(InputError):
    pass


class RegimeTooSmall(InputError):
    pass


class NuTooSmall(InputError):
    pass


class UnsupportedDepth(InputError):
    pass


class UnresolvableAtDepth(InputError):
    pass


# Verification errors: certificate failures, reported per stage.


class VerificationError(FibraError):
    pass


class DivisionByZero(VerificationError):
    pass


class ZeroInput(VerificationError):
    pass


class ZeroCurve(VerificationError):
    pass


class CommonComponent(VerificationError):
    pass


class IncompleteList(VerificationError):
    def __init__(self, message: str, *, deficit: int, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, details={**(details or {}), "deficit": deficit})
        self.deficit = deficit


class OverCount(VerificationError):
    def __init__(self, message: str, *, excess: int, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message, details={**(details or {}), "excess": excess})
        self.excess = excess


class UnsplitTangentCone(VerificationError):
    pass


class ComponentSingularityUnresolved(VerificationError):
    pass


class DuplicatePoint(VerificationError):
    pass


class LatticeMismatch(VerificationError):
    pass


class OddBranchClass(VerificationError):
    pass


class BranchNotSmooth(VerificationError):
    pass


class OddSelfIntersection(VerificationError):
    pass


class OddBranchCount(VerificationError):
    pass


class NotGenusTwoFiber(VerificationError):
    pass


class PencilDimensionMismatch(VerificationError):
    pass


class MissingPencil(VerificationError):
    pass


class IncompleteReport(VerificationError):
    pass


class ClaimMismatch(VerificationError):
    pass


class ExpectationMismatch(VerificationError):
    pass
