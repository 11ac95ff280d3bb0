"""Exception hierarchy shared by all engine modules."""


class EngineError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(EngineError):
    """Syntax or validation error in the signature/term DSL."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = f"{message} (line {line}, column {col})"
        super().__init__(message)
        self.line = line
        self.col = col


class TermError(EngineError):
    """Structural misuse of a term: bad arity, unmapped variable, bad index."""


class AlgebraError(EngineError):
    """Invalid operation table, map, partition, or argument shape."""


class VarietyError(EngineError):
    """An algebra required to lie in the working variety does not."""


class WordSystemError(EngineError):
    """A word or bijection system violates its defining conditions."""


class CapExceeded(EngineError):
    """A configurable resource cap was hit before the computation finished."""

    def __init__(self, message, partial_size=None):
        super().__init__(message)
        self.partial_size = partial_size
