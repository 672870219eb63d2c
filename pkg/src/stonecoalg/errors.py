"""Exception types and the enumeration size guard."""
from __future__ import annotations

import contextlib
from contextvars import ContextVar

DEFAULT_GUARD = 2 ** 20

_guard: ContextVar[int] = ContextVar("enumeration_guard", default=DEFAULT_GUARD)


class StoneCoalgError(Exception):
    pass


class SizeGuardExceeded(StoneCoalgError):
    """An enumeration would produce more values than the active guard allows."""

    def __init__(self, what: str, size: int, guard: int):
        super().__init__(f"{what}: {size} exceeds guard {guard}")
        self.what = what
        self.size = size
        self.guard = guard


class MalformedValue(StoneCoalgError):
    pass


class CarrierMismatch(StoneCoalgError):
    pass


class InvalidInput(StoneCoalgError):
    pass


class DepthUnavailable(StoneCoalgError):
    pass


class ParseError(InvalidInput):
    pass


def current_guard() -> int:
    return _guard.get()


def pair_guard() -> int:
    # dense lifted matrices have |FX|*|FY| cells
    return _guard.get() * 16


@contextlib.contextmanager
def size_guard(limit: int):
    """Temporarily override the enumeration guard for the current context."""
    if limit < 1:
        raise ValueError("guard must be positive")
    token = _guard.set(limit)
    try:
        yield limit
    finally:
        _guard.reset(token)


def check_size(what: str, size: int, limit: int | None = None) -> None:
    limit = current_guard() if limit is None else limit
    if size > limit:
        raise SizeGuardExceeded(what, size, limit)
