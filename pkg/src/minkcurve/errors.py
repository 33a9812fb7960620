"""Exception hierarchy.

``ValidationError`` subclasses describe bad user input (exit code 1 in the
CLI); ``KernelError`` subclasses describe mathematical degeneracies met while
computing (exit code 2).
"""

from __future__ import annotations


class CurveError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(CurveError):
    pass


class KernelError(CurveError):
    pass


class ParseError(ValidationError):
    def __init__(self, position: int, message: str, component: int | None = None):
        self.position = position
        self.message = message
        self.component = component
        where = f"component {component}, " if component is not None else ""
        super().__init__(f"{where}offset {position}: {message}")


class SpecValidationError(ValidationError):
    def __init__(self, field: str, message: str):
        self.field = field
        self.message = message
        super().__init__(f"{field}: {message}")


class FileError(ValidationError):
    pass


class UnknownFamily(ValidationError):
    pass


class BadParams(ValidationError):
    pass


class DomainError(KernelError):
    pass


class ZeroScale(KernelError):
    pass


class LightlikeTangent(KernelError):
    pass


class MixedCausality(KernelError):
    pass


class DegenerateCurvature(KernelError):
    pass


class DegenerateTorsion(KernelError):
    """Second curvature vanished; only the tangent and normal are defined.

    The partially built apparatus, when available, is kept on ``partial``.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class NullFrameVector(KernelError):
    pass


class TheoremHypothesisViolated(KernelError):
    pass


class InsufficientSamples(KernelError):
    pass
