"""
Theory Schemas
Closed-form predictions and verification tables
"""

import enum
from typing import List, Optional

import sympy
from pydantic import BaseModel, Field


class ClaimStatus(str, enum.Enum):
    THEOREM = "theorem"
    CONJECTURE = "conjecture"


class Prediction(BaseModel):
    """Leading-order value coefficient * n**power with the stated error order"""

    equation: str
    n: int
    coefficient: Optional[str] = Field(
        None, description="Exact coefficient as a sympy expression string"
    )
    power: int = 2
    leading_value: Optional[float] = None
    order_term: str = "O(n)"
    status: ClaimStatus = ClaimStatus.THEOREM

    def exact(self) -> Optional[sympy.Expr]:
        if self.coefficient is None:
            return None
        return sympy.sympify(self.coefficient) * sympy.Integer(self.n) ** self.power


class VerifyRow(BaseModel):
    equation: str
    n: int
    canonical_count: int
    predicted: Optional[float] = None
    gap: Optional[float] = None
    exhaustive_opt: Optional[int] = None
    alpha_fit: Optional[float] = None


class VerifyReport(BaseModel):
    equation: str
    status: ClaimStatus
    rows: List[VerifyRow]
    alpha_fit: Optional[float] = None
    beta_fit: Optional[float] = None
    alpha_predicted: Optional[float] = None

    @property
    def relative_error(self) -> Optional[float]:
        if self.alpha_fit is None or not self.alpha_predicted:
            return None
        return abs(self.alpha_fit - self.alpha_predicted) / self.alpha_predicted
