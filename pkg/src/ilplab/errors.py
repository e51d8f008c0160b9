"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """An enumeration or solver exceeded its configured work budget."""


class UnboundedSearchError(RuntimeError):
    """No finite search box could be derived for an integral enumeration."""


class EmbeddingError(RuntimeError):
    """An exact feasibility assertion of a bin-packing embedding failed."""


class ClaimFalsifiedError(RuntimeError):
    """A verified inequality failed on a concrete witness.

    Either the claimed inequality is wrong or there is a bug upstream;
    the witness is attached so the failure can be replayed.
    """

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness
