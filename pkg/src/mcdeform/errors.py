"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A structure failed one of its axioms (d^2 = 0, Jacobi, Leibniz, ...)."""


class DimensionError(ValueError):
    """Operands have incompatible shapes.  Distinct from "no solution"."""


class HostMismatchError(ValueError):
    """Elements living in different nilpotent DGLAs were combined."""


class InsufficientTruncationError(ValueError):
    """A truncation order is too small to be exact for the requested input."""

    def __init__(self, message, minimal):
        super().__init__(f"{message} (minimal sufficient order: {minimal})")
        self.minimal = minimal


class ParseError(ValueError):
    """Malformed structure description; carries a 1-based line and column."""

    def __init__(self, message, line=0, column=0):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
