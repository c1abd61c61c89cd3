"""Exception hierarchy shared by all isodiv modules."""


class DivError(Exception):
    """Base class for every error raised by isodiv."""


class GeometryError(DivError):
    pass


class OverlapError(GeometryError):
    """Two placed copies partially overlap (neither disjoint nor coincident)."""

    def __init__(self, i, j, message=None):
        self.pair = (i, j)
        super().__init__(message or f"copies {i} and {j} overlap")


class GluingError(GeometryError):
    """Coincident sides carry different labels or reversed vertex order."""


class WordError(DivError):
    """A gluing word is malformed or does not extend an earlier word."""


class TileMismatch(DivError):
    pass


class OutOfCopy(GeometryError):
    pass


class SizeGuard(DivError):
    """Input exceeds the size bound of an exhaustive algorithm."""


class NotSymmetric(DivError):
    pass


class DimensionMismatch(DivError):
    pass


class RankDeficient(DivError):
    pass


class ConvergenceFailure(DivError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ContinuityViolation(DivError):
    def __init__(self, message, mismatch):
        super().__init__(message)
        self.mismatch = mismatch


class ShapeMismatch(DivError):
    pass


class FormatError(DivError):
    """Unreadable or unsupported file (including unknown format_version)."""
