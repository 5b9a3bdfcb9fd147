"""
Shared exceptions
Plain input problems are ValueError; these cover the cases callers map to
dedicated exit codes or HTTP statuses.
"""


class BudgetExceededError(RuntimeError):
    """Raised when a search space is larger than the configured budget"""

    def __init__(self, space_size: int, budget: int):
        self.space_size = space_size
        self.budget = budget
        super().__init__(
            f"Search space of {space_size} colorings exceeds budget {budget}"
        )


class VerificationError(AssertionError):
    """Raised when an asserted (theorem- or identity-level) check fails"""
