"""Exceptions shared across kgsim modules."""


class KgsimError(Exception):
    """Base class for all kgsim errors."""


class ParseError(KgsimError):
    """A data file is malformed. Carries the 1-based offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NotFoundError(KgsimError):
    """A node (or other keyed object) is not present where it is required."""


class ConfigError(KgsimError):
    """Invalid configuration or an operation invoked in an invalid state."""


class UndefinedSimilarityError(KgsimError):
    """Similarity is mathematically undefined (e.g. a zero vector)."""
