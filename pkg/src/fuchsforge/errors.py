"""Exception hierarchy.

Every error carries the process exit code the command line front end uses
when the error escapes a subcommand.
"""


class FuchsError(Exception):
    exit_code = 1


class DSLParseError(FuchsError):
    """Malformed operator expression; ``position`` is a 0-based offset."""

    exit_code = 2

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class PreconditionError(FuchsError):
    exit_code = 3


class FieldMismatchError(PreconditionError):
    pass


class NotFuchsianError(PreconditionError):
    pass


class ResonantError(PreconditionError):
    """Raised where a nonresonant Euler part is required."""

    def __init__(self, orders):
        self.orders = tuple(orders)
        super().__init__(f"operator is resonant at orders {list(self.orders)}")


class NotSplitError(PreconditionError):
    """The Euler part has roots outside the active field."""


class NotCoprimeError(PreconditionError):
    pass


class PrecisionError(PreconditionError):
    """Truncation order too low to finish an exact computation."""


class LogObstruction(FuchsError):
    """A logarithmic term would be needed at relative order ``m``.

    ``exponent`` is the exponent whose recursion broke down.
    """

    exit_code = 4

    def __init__(self, m, exponent=None, detail=""):
        self.m = m
        self.exponent = exponent
        msg = f"logarithmic obstruction at relative order {m}"
        if exponent is not None:
            msg += f" for exponent {exponent}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class InternalInvariantError(FuchsError):
    exit_code = 5
