"""Exception types raised by sketch parsing and model building."""
from __future__ import annotations


class GeosketcherError(Exception):
    """Base class for all errors raised by this package."""


class SketchSyntaxError(GeosketcherError):
    """Input is not well-formed JSON; carries the byte offset of the failure."""

    def __init__(self, message: str, byte_offset: int):
        super().__init__(f"{message} (byte offset {byte_offset})")
        self.byte_offset = byte_offset


class SchemaError(GeosketcherError):
    """A field is missing, has the wrong type, or violates a structural rule."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class DanglingReferenceError(GeosketcherError):
    """A unit or horizon id is referenced but never declared."""

    def __init__(self, ref_id: str, path: str):
        super().__init__(f'{path}: unknown id "{ref_id}"')
        self.ref_id = ref_id
        self.path = path


class EmptyConstraintsError(GeosketcherError):
    """An interpolant was requested with no constraints at all."""


class SingularSystemError(GeosketcherError):
    """The interpolation system has no usable factorization."""

    def __init__(self, message: str):
        super().__init__(
            message
            + " (consider regularization > 0 or dedup_radius > 0, or remove"
            " coincident/degenerate constraints)"
        )


class NoValueAnchorError(GeosketcherError):
    """A horizon has only derivative data, so its height is undetermined."""


class BaseAboveTerrainError(GeosketcherError):
    """model_base is not strictly below the terrain everywhere on the grid."""


class MissingCoverUnitError(GeosketcherError):
    """Every unit is some horizon's below_unit; nothing is left for the top interval."""


class UnknownUnitError(GeosketcherError):
    """A horizon's below_unit does not appear in the age order."""
