class CubelabError(Exception):
    """Base class for library errors."""


class BudgetExceeded(CubelabError):
    """An enumeration or quadrature would exceed the configured work budget."""

    def __init__(self, estimate, budget, what="enumeration"):
        self.estimate = estimate
        self.budget = budget
        super().__init__(f"{what} needs ~{estimate:.3g} operations, budget is {budget:.3g}")


class ValidationError(CubelabError):
    """A matrix or parameter set fails a structural check."""
