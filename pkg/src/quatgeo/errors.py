"""Exception types shared across the package."""


class QuatGeoError(Exception):
    """Base class for all errors raised by quatgeo."""


class BackendMismatch(QuatGeoError, TypeError):
    """Exact and floating quaternions were combined."""


class InternalInconsistency(QuatGeoError, ArithmeticError):
    """A numerical invariant that must hold by construction was violated."""


class NotAnEigenvalue(QuatGeoError, ValueError):
    pass


class NotDiagonalizable(QuatGeoError, ValueError):
    pass


class NotInvertible(QuatGeoError, ZeroDivisionError):
    pass


class DegenerateD(QuatGeoError, ValueError):
    """Closed forms need d - 1 invertible; use repeated multiplication instead."""


class ShapeError(QuatGeoError, ValueError):
    pass


class ExplosionCap(QuatGeoError, RuntimeError):
    """Enumeration produced more elements than the configured cap."""


class ImageNotFinite(QuatGeoError, RuntimeError):
    pass


class ClosureError(QuatGeoError, RuntimeError):
    pass


class NotAGroup(QuatGeoError, ValueError):
    pass


class Unrecognized(QuatGeoError, ValueError):
    pass


class StepCapExceeded(QuatGeoError, RuntimeError):
    pass


class ParseError(QuatGeoError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class FamilyMismatch(QuatGeoError, TypeError):
    """Heisenberg elements from different families (or sizes) were combined."""
