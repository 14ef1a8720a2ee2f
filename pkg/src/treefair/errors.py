"""Exception types shared across the package."""


class TreeFairError(Exception):
    """Base class for all errors raised by treefair."""


class MatrixParseError(TreeFairError, ValueError):
    """Matrix text could not be parsed.

    ``row`` and ``column`` are 1-based and may be ``None`` when the error is
    not tied to a single position.
    """

    def __init__(self, message, row=None, column=None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.row = row
        self.column = column


class ZeroRowError(TreeFairError, ValueError):
    """An analysis entry point received a matrix with an empty successor set."""

    def __init__(self, symbols):
        self.symbols = tuple(symbols)
        listed = ", ".join(str(s) for s in self.symbols)
        super().__init__(f"symbol(s) {listed} have no allowed followers")


class MovePreconditionError(TreeFairError, ValueError):
    """A move s_ab was applied to a row that does not contain ``a``, or with a == b."""


class CapacityError(TreeFairError, RuntimeError):
    """A configured capacity cap would be exceeded."""

    def __init__(self, cap, limit, requested):
        self.cap = cap
        self.limit = limit
        self.requested = requested
        super().__init__(f"capacity cap '{cap}' exceeded: requested {requested}, limit {limit}")
