"""Shared exception types."""


class BudgetError(RuntimeError):
    """A requested computation exceeds the documented size budget."""


class ContractError(RuntimeError):
    """A numerical contract (Hermiticity, residual, norm drift) was breached."""
