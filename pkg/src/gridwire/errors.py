"""Exception types shared across the package."""


class GridwireError(Exception):
    """Base class for all package-specific errors."""


class ParseError(GridwireError):
    """Malformed tree text. `offset` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (byte {offset})")
        self.offset = offset


class DegreeError(ParseError):
    """A node was given more children than the degree bound allows."""


class OrderingError(GridwireError):
    """A subdivision plan breaks the left-heavy size ordering."""


class BudgetError(GridwireError):
    """An exhaustive search exceeded its configured budget."""
