"""Exception hierarchy shared by every DTOrder module.

Infeasibility of a *schedule* is reported as data (see ``ValidationReport``);
the exceptions below are for bad input and impossible requests.
"""


class DTOrderError(Exception):
    """Base class for all DTOrder errors."""


class InputError(DTOrderError, ValueError):
    """Malformed, unknown or missing input (task ids, names, files)."""


class TraceParseError(InputError):
    """A trace file could not be parsed. ``line`` is the 1-based physical line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class InfeasibleInstanceError(DTOrderError):
    """Some task needs more memory than the instance capacity."""


class ParameterError(DTOrderError, ValueError):
    """A numeric parameter is outside its allowed range."""


class SizeLimitError(DTOrderError):
    """An exhaustive search was asked for more tasks than its limit."""


class WitnessError(DTOrderError):
    """Triplets handed to the 3-Partition witness builder are not a valid partition."""


class PreconditionError(DTOrderError):
    """The arguments do not satisfy the operation's stated precondition."""
