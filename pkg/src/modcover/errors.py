"""Shared exception types."""


class GuardExceeded(Exception):
    """An input exceeds a documented size guard.

    `guard` names the violated guard so callers (and skip reports) can
    say which limit was hit.
    """

    def __init__(self, guard: str, message: str):
        super().__init__(message)
        self.guard = guard


class ParseError(ValueError):
    """DSL parse failure, with the offending position for caret display."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        caret = text + "\n" + " " * pos + "^"
        super().__init__(f"{message} at position {pos}:\n{caret}")
