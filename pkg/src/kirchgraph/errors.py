"""Exception types shared across the package."""


class KirchgraphError(Exception):
    """Base class for all library errors."""


class InputError(KirchgraphError, ValueError):
    """A caller-supplied object violates an operation precondition."""


class ParameterError(KirchgraphError, ValueError):
    """A numeric parameter is outside its admissible range."""


class ContractError(KirchgraphError, RuntimeError):
    """An object is used in a way its construction contract forbids."""


class ValidationError(KirchgraphError, ValueError):
    """Structured input violates a named invariant.

    ``invariant`` carries the machine-readable name of the violated rule,
    e.g. ``"edge_weight_positive"`` or ``"connected"``.
    """

    def __init__(self, invariant: str, message: str) -> None:
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant


class SolverFailure(KirchgraphError, RuntimeError):
    """A solver could not produce the object it was asked for."""
