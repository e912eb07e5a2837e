"""Exception types shared across the package.

The CLI maps these onto process exit codes, so user-facing failures
should raise one of the classes below rather than a bare Exception.
"""

from __future__ import annotations


class CspmonError(Exception):
    """Base class for all errors raised by this package."""


class LexError(CspmonError):
    """Illegal character in the specification source."""

    def __init__(self, line: int, col: int, char: str):
        self.line = line
        self.col = col
        self.char = char
        super().__init__(f"line {line}, col {col}: illegal character {char!r}")


class ParseError(CspmonError):
    """Syntax violation in the specification source."""

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


class ResolveError(CspmonError):
    """One or more name/arity/binding violations in a parsed spec.

    Carries the full list so every problem is reported at once.
    """

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class EvalError(CspmonError):
    """Expression evaluation failed (type mismatch or unknown name)."""


class DomainError(CspmonError):
    """A channel parameter domain is empty."""


class AlphabetError(CspmonError):
    """An event set refers to events outside the model alphabet."""


class LimitExceeded(CspmonError):
    """State or transition count went over the synthesis limits."""

    def __init__(self, kind: str, count: int, limit: int):
        self.kind = kind
        self.count = count
        self.limit = limit
        super().__init__(f"{kind} limit exceeded: reached {count}, limit {limit}")


class UnknownState(CspmonError):
    """A state id outside the transition system was used."""


class NondeterministicOracle(CspmonError):
    """The monitor was given an oracle that is not deterministic/tau-free."""


class ConfigError(CspmonError):
    """Invalid run configuration."""

    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"{key}: {reason}")


class MappingError(CspmonError):
    """Invalid event-name mapping file."""


class PositionError(CspmonError):
    """Fault-injection position outside the trace bounds."""


class BindError(CspmonError):
    """The online server could not bind its listen address."""
