"""Exception types raised across the package."""


class QafError(Exception):
    """Base class for all package errors."""


class ContractError(QafError, ValueError):
    """An argument violates an operation's precondition."""


class StructuralError(QafError):
    """A circuit is inconsistent, cyclic, or has undetermined nets."""


class BoundExceededError(QafError):
    """An exhaustive routine was asked to enumerate beyond its bound."""

    def __init__(self, what: str, size: int, bound: int):
        self.size = size
        self.bound = bound
        super().__init__(f"{what}: {size} exceeds the enumeration bound of {bound}")


class NonConvergenceError(QafError):
    """A heuristic solver did not reach the certified ground energy."""


class UnsatisfiableError(QafError):
    """An exact solve proved that no state meets every constraint."""
