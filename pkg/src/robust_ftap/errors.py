"""Semantic exception hierarchy shared by all modules."""


class RobustFtapError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(RobustFtapError):
    """Vector/matrix dimensions do not line up."""


class EmptyPolytope(RobustFtapError):
    """A feasible region required to be nonempty is empty."""


class EnumerationCapExceeded(RobustFtapError):
    """Subset or basis enumeration would exceed the configured cap."""

    def __init__(self, size: int, cap: int):
        super().__init__(f"enumeration over {size} outcomes exceeds cap {cap}")
        self.size = size
        self.cap = cap


class HypothesisViolated(RobustFtapError):
    """An (epsilon, delta) hypothesis required by a construction fails."""


class BoundViolated(RobustFtapError):
    """A guaranteed bound failed verification; signals an implementation bug."""


class NaViolated(RobustFtapError):
    """An operation requiring no-arbitrage was called on a market with arbitrage."""


class EmptyMartingalePolytope(RobustFtapError):
    """No martingale measure exists; signals a no-arbitrage violation."""


class InputError(RobustFtapError):
    """Malformed input file or argument."""
