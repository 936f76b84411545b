"""Positioned diagnostics for parsing and semantic validation."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Pos:
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}"


NO_POS = Pos(0, 0)


class SpecEncodingError(Exception):
    """Raised when specification bytes are not valid UTF-8."""


class SpecSyntaxError(Exception):
    """Parse failure with position and the set of expected tokens."""

    def __init__(self, pos: Pos, expected: list[str], found: str):
        self.pos = pos
        self.expected = list(expected)
        self.found = found
        super().__init__(self._format())

    def _format(self) -> str:
        exp = " or ".join(self.expected)
        return f"{self.pos}: expected {exp}, found {self.found}"


@dataclass(frozen=True)
class SemanticIssue:
    code: str
    pos: Pos
    message: str

    def __str__(self):
        return f"{self.pos}: {self.code}: {self.message}"


class SpecValidationError(Exception):
    """One or more semantic errors; carries the full list, not just the first."""

    def __init__(self, issues: list[SemanticIssue]):
        self.issues = list(issues)
        super().__init__("; ".join(str(i) for i in self.issues))
