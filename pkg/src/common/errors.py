from __future__ import annotations


class SlkError(ValueError):
    """Base class for every error raised on mathematically invalid input."""


class ShapeError(SlkError):
    pass


class NonUnimodularError(SlkError):
    pass


class PathError(SlkError):
    pass


class ClosureError(PathError):
    pass


class RangeError(SlkError):
    pass


class TransitionShapeError(SlkError):
    pass


class TilingError(SlkError):
    pass


class FriezeError(SlkError):
    pass


class PreconditionError(SlkError):
    pass


class CodecError(SlkError):
    pass
