"""
Exception classes for the real-time search lab
"""

from typing import Any, Optional


class SearchLabError(Exception):
    """Base exception for all rts-backtrack errors"""
    pass


class ValidationError(SearchLabError):
    """Raised when a problem description or a state id is invalid"""
    pass


class MapParseError(ValidationError):
    """Raised when a grid map cannot be decoded"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{location}")


class ConfigurationError(SearchLabError):
    """Raised when run configuration or algorithm parameters are invalid"""
    pass


class FrameworkError(SearchLabError):
    """Raised when a step policy breaks the framework contract"""
    pass


class QuotaExceededError(FrameworkError):
    """Raised when a learning-amount update would exceed the learning quota"""

    def __init__(self, learning_amount: Any, quota: Any):
        self.learning_amount = learning_amount
        self.quota = quota
        super().__init__(f"Learning amount {learning_amount} would exceed quota {quota}")


class BruteForceLimitError(SearchLabError):
    """Raised when exact subset enumeration is requested above the size cap"""
    pass


class FormatError(SearchLabError):
    """Raised when a trace cannot be rendered or read"""
    pass
