"""Exception types shared across the package."""


class CarpetError(Exception):
    """Base class for domain errors (mapped to exit code 1 by the CLI)."""


class InvalidArgument(CarpetError, ValueError):
    pass


class WordSyntaxError(InvalidArgument):
    """Raised for malformed word text; ``str(exc)`` carries a caret diagnostic."""

    def __init__(self, text: str, pos: int, reason: str):
        self.text = text
        self.pos = pos
        self.reason = reason
        super().__init__(f"{reason}\n  {text}\n  {' ' * pos}^")


class ResourceLimitError(CarpetError):
    pass
