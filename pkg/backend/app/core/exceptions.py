"""
Error hierarchy for the heaviest-cycle bound verifier
Each error carries the CLI exit code it maps to
"""

from typing import Optional


class CycleBoundError(Exception):
    """Base class for every error raised by the services"""

    exit_code: int = 1


class GraphFormatError(CycleBoundError, ValueError):
    """Malformed edge-list or JSON input"""

    exit_code = 2

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class GraphValidationError(GraphFormatError):
    """Input describes something other than a simple positively weighted graph"""


class PreconditionError(CycleBoundError, ValueError):
    """An operation was called outside its domain"""

    exit_code = 2


class CapExceededError(CycleBoundError):
    """An exact computation would exceed a configured vertex cap"""

    exit_code = 4

    def __init__(self, cap_name: str, cap: int, size: int):
        self.cap_name = cap_name
        self.cap = cap
        self.size = size
        super().__init__(
            f"{cap_name} of {cap} vertices exceeded (got {size}); "
            f"raise it with --{cap_name.replace('_', '-')} or the "
            f"CYCLEBOUND_{cap_name.upper()} environment variable"
        )


class InvariantViolation(CycleBoundError, AssertionError):
    """A mechanically checked identity failed"""

    exit_code = 3


class CounterexampleError(InvariantViolation):
    """The weighted local cycle inequality failed on a concrete instance"""

    def __init__(self, message: str, instance: str):
        self.instance = instance
        super().__init__(f"{message}\n--- instance ---\n{instance}")
