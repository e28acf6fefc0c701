"""Exception types shared across the package.

All domain errors derive from ValueError so callers that only care about
"bad input" can catch one thing; the subclasses exist for callers that
need to tell the failure channels apart (the CLI maps them to exit codes).
"""

from __future__ import annotations

__all__ = [
    "CapacityError",
    "ConsistencyError",
    "ExtractionError",
    "PreconditionError",
    "ScenarioFileError",
    "UnsupportedAxisError",
]


class CapacityError(ValueError):
    """Requested object exceeds the supported register size (9 qubits)."""


class ConsistencyError(ValueError):
    """A numerically checked algebraic contract was violated."""


class PreconditionError(ValueError):
    """Operation applied to a scenario in the wrong preparation stage."""


class UnsupportedAxisError(ValueError):
    """Axis has no defined action on the requested target."""


class ExtractionError(ValueError):
    """State amplitudes do not determine a single parity constraint."""

    def __init__(self, message: str, report: object | None = None) -> None:
        super().__init__(message)
        self.report = report


class ScenarioFileError(ValueError):
    """Scenario description file is malformed."""

    def __init__(self, message: str, line: int | None = None) -> None:
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
