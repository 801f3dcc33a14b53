"""Exception hierarchy shared by all modules."""
from __future__ import annotations


class DiagramError(Exception):
    """Base class for every error raised by this package."""


class AlgebraError(DiagramError):
    pass


class SignatureError(DiagramError):
    pass


class ParseError(DiagramError):
    """Lexical or grammatical error; ``pos`` is a 0-based character offset."""

    def __init__(self, message: str, pos: int | None = None, text: str | None = None):
        self.message = message
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}")


class SortMismatch(DiagramError):
    """Sequential composition whose middle interfaces disagree."""

    def __init__(self, left, right, pos: int | None = None):
        self.left = left
        self.right = right
        self.pos = pos
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(
            f"sort mismatch{where}: left has sort {tuple(left)}, right has sort "
            f"{tuple(right)} ({left[1]} != {right[0]})"
        )


class DeclarationError(DiagramError):
    pass


class TypingError(DiagramError):
    pass
