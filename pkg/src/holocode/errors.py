"""Exception types shared across the package."""


class CapacityError(RuntimeError):
    """A problem size exceeds what a routine is built to handle."""


class ParseError(ValueError):
    """Malformed text input; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
