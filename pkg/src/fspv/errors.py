"""Exception and warning types shared across the toolkit."""

from __future__ import annotations


class FspError(Exception):
    """Base class for every error raised by fspv."""


class PositionedError(FspError):
    """An error tied to a 1-based line/column in some source text."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class UnknownCharacter(PositionedError):
    def __init__(self, char: str, line: int, column: int):
        super().__init__(f"unknown character {char!r}", line, column)
        self.char = char


class FspSyntaxError(PositionedError):
    def __init__(self, line: int, column: int, expected: str, found: str):
        super().__init__(f"expected {expected}, found {found}", line, column)
        self.expected = expected
        self.found = found


class DuplicateDefinition(FspError):
    def __init__(self, name: str):
        super().__init__(f"duplicate definition of {name!r}")
        self.name = name


class UnresolvedReference(FspError):
    def __init__(self, name: str):
        super().__init__(f"unresolved reference {name!r}")
        self.name = name


class EvalError(FspError):
    """Raised while evaluating an integer or boolean expression."""


class UnboundVariable(EvalError):
    def __init__(self, name: str):
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class DivisionByZero(EvalError, ZeroDivisionError):
    def __init__(self) -> None:
        super().__init__("division or modulo by zero")


class ArityMismatch(FspError):
    def __init__(self, name: str, expected: int, found: int):
        super().__init__(f"{name!r} takes {expected} index argument(s), got {found}")
        self.name = name


class RangeIndexOutOfBounds(FspError):
    def __init__(self, name: str, value: int):
        super().__init__(f"argument {value} outside the declared range of {name!r}")
        self.name = name
        self.value = value


class StateLimitExceeded(FspError):
    def __init__(self, limit: int):
        super().__init__(f"state limit of {limit} exceeded")
        self.limit = limit


class NondeterministicProperty(FspError):
    def __init__(self, state: int, label: str):
        super().__init__(f"property is nondeterministic: state {state} has several {label!r} transitions")
        self.state = state
        self.label = label


class GaiaError(FspError):
    """Base class for liveness-expression errors."""


class GaiaSyntaxError(GaiaError, PositionedError):
    pass


class UnresolvedRef(GaiaError):
    def __init__(self, name: str):
        super().__init__(f"unresolved liveness reference {name!r}")
        self.name = name


class CyclicRef(GaiaError):
    def __init__(self, name: str):
        super().__init__(f"cyclic liveness reference through {name!r}")
        self.name = name


class UnknownOldLabel(UserWarning):
    """A relabel pair names a label that no component uses."""


class UnknownProgressLabel(UserWarning):
    """A progress set names a label outside the checked alphabet."""
