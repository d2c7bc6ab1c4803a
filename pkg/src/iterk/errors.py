"""Exception types shared across the package."""


class ArityError(ValueError):
    """A state, context or seed does not match the arity of the map."""


class BudgetError(RuntimeError):
    """An exhaustive computation would exceed the configured resource budget."""


class NonAffineError(ValueError):
    """A map definition is not affine, so matrix-based analysis cannot apply."""


class ParseError(ValueError):
    """Syntax or validation error in a textual input, with source position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
