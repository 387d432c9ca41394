"""Exception hierarchy; every error knows the CLI exit code it maps to."""

from typing import Optional


class PaybackError(Exception):
    """Base class for all library errors."""

    exit_code = 2


class InvalidEventError(PaybackError, ValueError):
    """Negative event time, malformed rational or non-canonical project."""


class InvalidDiscountError(PaybackError, ValueError):
    """Discount function violating positivity or alpha(0) = 1."""


class DiscountTableMissError(PaybackError, KeyError):
    """A tabulated discount function has no factor at the requested time."""

    exit_code = 3

    def __init__(self, time):
        self.time = time
        super().__init__(f"discount table has no factor at time {time}")

    def __str__(self) -> str:
        return self.args[0]


class IngestError(PaybackError):
    """Malformed cash flow or discount table file."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = path or "<input>"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")


class UsageError(PaybackError):
    """Invalid combination of options or arguments."""


class PreconditionError(PaybackError):
    """An operation was called outside its precondition."""


class UnknownFunctionalError(PaybackError, KeyError):
    """No built-in payback functional with the given name."""

    def __str__(self) -> str:
        return f"unknown payback functional: {self.args[0]}"
