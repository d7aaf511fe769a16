"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class WordMapError(Exception):
    """Base class for engine errors."""


class ResourceLimitError(WordMapError):
    """An order cap or evaluation budget would be exceeded."""

    def __init__(self, message: str, required: int | None = None, budget: int | None = None):
        super().__init__(message)
        self.required = required
        self.budget = budget


class ContractError(WordMapError, ValueError):
    """A precondition of an operation does not hold."""


class ParseError(WordMapError, ValueError):
    def __init__(self, message: str, text: str = "", position: int = 0):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class SchemaError(WordMapError, ValueError):
    def __init__(self, message: str, path: str = "", field: str = ""):
        where = ", ".join(x for x in (path, field) if x)
        super().__init__(f"{message} ({where})" if where else message)
        self.path = path
        self.field = field


class InternalConsistencyError(WordMapError):
    """A computed identity that must hold failed; indicates a bug or a false claim."""


class HypothesisError(ContractError):
    """The hypotheses of a checked statement fail, so its conclusion is not tested."""
