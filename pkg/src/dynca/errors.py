"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Raised when numbering parameters fail their feasibility constraints."""


class CapacityError(RuntimeError):
    """Raised when a structure sized for max_n is asked to grow past it."""


class TraceParseError(ValueError):
    """Raised on malformed trace text.  Carries 1-based line and column."""

    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col
