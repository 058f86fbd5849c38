"""Exception types raised by the engine."""

from __future__ import annotations


class QstrError(Exception):
    """Base class for all engine errors."""


class CalculusMismatchError(QstrError):
    """Two relations or networks from different calculi were combined."""


class UnknownCalculusError(QstrError):
    pass


class ParseError(QstrError):
    """Malformed input file. Carries the source location when known."""

    def __init__(self, message: str, path: str | None = None,
                 line: int | None = None, column: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        self.column = column
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.path or "<input>"
        if self.line is not None:
            where += f":{self.line}"
            if self.column is not None:
                where += f":{self.column}"
        return f"{where}: {self.message}"


class NoScenarioError(QstrError):
    """The network has no scenario."""


class ContradictionError(QstrError):
    """Evidence on an edge is incompatible with the background knowledge."""

    def __init__(self, message: str, edge: tuple[str, str]):
        self.edge = edge
        super().__init__(message)
