"""
Exception hierarchy for spindlekit.

Library code raises these; the CLI maps them to exit codes via ``exit_code_for``.
Infeasibility is never an exception: deciders report it as a normal result.
"""

from typing import Optional


EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3


class SpindleError(Exception):
    """Base class for every error raised by spindlekit."""


class InputError(SpindleError, ValueError):
    """Malformed or invalid input document.

    ``path`` is a JSON-path-like locator such as ``.points[0][1]``; ``line`` and
    ``column`` are set when the failure comes from the syntax layer.
    """

    def __init__(self, message: str, path: Optional[str] = None,
                 line: Optional[int] = None, column: Optional[int] = None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path:
            where.append(f"at {path}")
        if line is not None:
            where.append(f"line {line} column {column}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ConfigError(SpindleError, ValueError):
    """Invalid setting in the environment, .env file or YAML settings file."""


class UsageError(SpindleError):
    """Flags that do not fit the command or the input document."""


class DimensionMismatchError(SpindleError, ValueError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"dimension mismatch: expected {expected}, got {got}")


class NotInSetError(SpindleError, ValueError):
    """The base point of a normal query is not a member of the point set."""


class PreconditionError(SpindleError):
    """A theorem construction was requested on a set that violates its hypothesis."""

    def __init__(self, message: str, point_index: Optional[int] = None):
        self.point_index = point_index
        super().__init__(message)


class EmptyRegionError(SpindleError):
    pass


class NoEnclosingBallError(SpindleError):
    """No closed r-ball contains the set, so its r-ball hull is undefined."""


class SolverError(SpindleError):
    """A convex program did not converge (distinct from infeasibility)."""


class ConsistencyError(SpindleError):
    """Internal assertion failed, e.g. exact and oracle verdicts disagree."""


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, ConsistencyError):
        return EXIT_INTERNAL
    return EXIT_USAGE
