"""Exception types raised across the package."""


class PipError(Exception):
    """Base class for all pipvec errors."""


class InvalidGeometry(PipError, ValueError):
    """A point, ring or polygon violates its construction invariants."""


class RingTooShort(InvalidGeometry):
    """A closed ring has fewer than four vertices."""


class DegenerateEdge(PipError, ArithmeticError):
    """An edge cannot be used for the requested computation.

    Raised for zero-length edges (no normal) and for horizontal edges lying
    on the query ray (the crossing parameter divides by zero).
    """

    def __init__(self, message, edge_index=None):
        super().__init__(message)
        self.edge_index = edge_index


class DegenerateFit(PipError, ValueError):
    """Least-squares fit requested on fewer than two distinct point counts."""


class MissingFit(PipError, KeyError):
    def __init__(self, algorithm):
        super().__init__(algorithm)
        self.algorithm = algorithm

    def __str__(self):
        return f"no fit available for algorithm {self.algorithm!r}"


class InvalidGeoJSON(PipError, ValueError):
    pass


class UnsupportedGeometry(PipError, ValueError):
    def __init__(self, geometry_type, detail=""):
        msg = f"unsupported geometry type {geometry_type!r}"
        if detail:
            msg = f"{msg}: {detail}"
        super().__init__(msg)
        self.geometry_type = geometry_type


class ColumnMissing(PipError, KeyError):
    def __init__(self, column, path=None):
        super().__init__(column)
        self.column = column
        self.path = path

    def __str__(self):
        where = f" in {self.path}" if self.path else ""
        return f"column {self.column!r} not found{where}"


class ParseError(PipError, ValueError):
    """A data row could not be parsed; ``row`` is the 1-based file line."""

    def __init__(self, row, column, reason, path=None):
        self.row = row
        self.column = column
        self.reason = reason
        self.path = path
        where = f"{path}: " if path else ""
        super().__init__(f"{where}row {row}, column {column!r}: {reason}")
