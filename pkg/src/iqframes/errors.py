"""Exception types shared across the package.

Every error that carries a counterexample exposes it as ``witness`` so the
CLI can serialize it into a report entry.
"""

from __future__ import annotations

from typing import Any


class IQFError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class NotJoinPreserving(IQFError):
    pass


class NotOpen(IQFError):
    pass


class PreconditionFailed(IQFError):
    pass


class NotSheafHom(IQFError):
    pass


class NotEquivariant(IQFError):
    pass


class NotCompatiblePreserving(IQFError):
    pass


class InvalidGroupoid(IQFError):
    pass


class InvalidAction(IQFError):
    pass


class InvalidBiAction(IQFError):
    pass


class InvalidFunctor(IQFError):
    pass


class NoStableSupport(IQFError):
    pass


class NotOpenRight(IQFError):
    pass


class NotBisheaf(IQFError):
    pass


class NotPrincipal(IQFError):
    pass


class SupportMismatch(IQFError):
    pass


class HypothesisFailed(IQFError):
    pass


class QuantaleMismatch(IQFError):
    pass


class Inconclusive(IQFError):
    """Bounded search exhausted without a witness while the oracle says yes."""

    def __init__(self, bound: int, minimal_size: int | None = None) -> None:
        super().__init__(
            f"no biprincipal witness with at most {bound} points", witness=minimal_size
        )
        self.bound = bound
        self.minimal_size = minimal_size


class ParseError(IQFError):
    """Malformed input file; ``where`` locates the offending line/field."""

    def __init__(self, message: str, where: str = "") -> None:
        super().__init__(f"{where}: {message}" if where else message, witness=where)
        self.where = where
