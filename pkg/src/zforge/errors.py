"""Exception hierarchy shared by every zforge module."""

from __future__ import annotations


class ZforgeError(Exception):
    """Base class for all library errors."""


class NotPrime(ZforgeError, ValueError):
    def __init__(self, p: int) -> None:
        super().__init__(f"{p} is not prime")
        self.p = p


class NoIrreducibleFound(ZforgeError, RuntimeError):
    pass


class SpecMismatch(ZforgeError, ValueError):
    pass


class DivisionByZero(ZforgeError, ZeroDivisionError):
    pass


class BudgetExceeded(ZforgeError, RuntimeError):
    """An enumeration or search exceeded its configured budget."""


class DuplicatePoints(ZforgeError, ValueError):
    pass


class ArityMismatch(ZforgeError, ValueError):
    pass


class IncompatibleField(ZforgeError, ValueError):
    pass


class EllTooSmall(ZforgeError, ValueError):
    pass


class VariantMismatch(ZforgeError, ValueError):
    pass


class OutOfRange(ZforgeError, ValueError):
    pass


class TooSmall(ZforgeError, ValueError):
    pass


class ConstructionFailed(ZforgeError, RuntimeError):
    """Rejection sampling ran out of retries at ``index``.

    ``retries_used`` holds the attempt counts of every index that was
    accepted before the failure.
    """

    def __init__(self, index: int, retries: int, retries_used: list[int] | None = None) -> None:
        super().__init__(f"construction failed at index {index} after {retries} attempts")
        self.index = index
        self.retries = retries
        self.retries_used = list(retries_used or [])
