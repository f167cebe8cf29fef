"""Shared exception types; the CLI maps them onto exit codes."""


class PreconditionError(ValueError):
    """An operation was called outside its documented domain (exit 3)."""


class SpecFormatError(ValueError):
    """Structurally invalid spec or JSON input (exit 2)."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer}: {message}" if pointer else message)
        self.pointer = pointer


class BudgetExceededError(RuntimeError):
    """A search or enumeration ran out of its work budget (exit 4)."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class InvariantError(AssertionError):
    """An internal consistency check failed (exit 5)."""
