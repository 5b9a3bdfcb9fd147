"""
Equation Schemas
The equation families and their text forms
"""

import enum
import math
import re
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Ordered variable values (x, y, z) or (x, y, w, z)
Solution = Tuple[int, ...]


class EquationKind(str, enum.Enum):
    SCHUR_LIKE = "x+ay=z"
    TWO_COEF = "ax+by=az"
    FOUR_VAR = "x+y+w=z"


_PARAMS = re.compile(r"^\s*([ab])\s*=\s*(\d+)\s*$")


class Equation(BaseModel):
    """x + a*y = z (a >= 1), a*x + b*y = a*z (coprime a, b >= 2) or x + y + w = z"""

    model_config = ConfigDict(frozen=True)

    kind: EquationKind = EquationKind.SCHUR_LIKE
    a: int = Field(1, ge=1)
    b: Optional[int] = Field(None, ge=2)

    @model_validator(mode="after")
    def check_parameters(self) -> "Equation":
        if self.kind == EquationKind.TWO_COEF:
            if self.b is None or self.a < 2:
                raise ValueError("ax+by=az needs a, b >= 2")
            if math.gcd(self.a, self.b) != 1:
                raise ValueError(f"ax+by=az needs gcd(a, b) = 1, got a={self.a}, b={self.b}")
        elif self.b is not None:
            raise ValueError(f"Parameter b is only used by {EquationKind.TWO_COEF.value}")
        if self.kind == EquationKind.FOUR_VAR and self.a != 1:
            raise ValueError(f"{EquationKind.FOUR_VAR.value} takes no parameters")
        return self

    @classmethod
    def schur(cls, a: int = 1) -> "Equation":
        return cls(kind=EquationKind.SCHUR_LIKE, a=a)

    @classmethod
    def two_coef(cls, a: int, b: int) -> "Equation":
        return cls(kind=EquationKind.TWO_COEF, a=a, b=b)

    @classmethod
    def four_var(cls) -> "Equation":
        return cls(kind=EquationKind.FOUR_VAR)

    @classmethod
    def parse(cls, text: str) -> "Equation":
        """Parse 'schur', 'x+ay=z:a=2', 'ax+by=az:a=2,b=3' or 'x+y+w=z'"""
        head, _, tail = text.strip().replace(" ", "").partition(":")
        params = {}
        if tail:
            for item in tail.split(","):
                match = _PARAMS.match(item)
                if not match:
                    raise ValueError(f"Malformed equation parameter '{item}' in '{text}'")
                params[match.group(1)] = int(match.group(2))

        if head in ("schur", "x+y=z"):
            if params:
                raise ValueError(f"'{head}' takes no parameters")
            return cls.schur()
        if head == EquationKind.SCHUR_LIKE.value:
            return cls.schur(params.get("a", 1))
        if head == EquationKind.TWO_COEF.value:
            if "a" not in params or "b" not in params:
                raise ValueError("ax+by=az needs both a and b, e.g. 'ax+by=az:a=2,b=3'")
            return cls.two_coef(params["a"], params["b"])
        if head == EquationKind.FOUR_VAR.value:
            return cls.four_var()
        raise ValueError(f"Unknown equation '{text}'")

    @property
    def text(self) -> str:
        if self.kind == EquationKind.SCHUR_LIKE:
            return "schur" if self.a == 1 else f"x+ay=z:a={self.a}"
        if self.kind == EquationKind.TWO_COEF:
            return f"ax+by=az:a={self.a},b={self.b}"
        return EquationKind.FOUR_VAR.value

    @property
    def arity(self) -> int:
        return 4 if self.kind == EquationKind.FOUR_VAR else 3

    def satisfied_by(self, solution: Solution) -> bool:
        if self.kind == EquationKind.SCHUR_LIKE:
            x, y, z = solution
            return x + self.a * y == z
        if self.kind == EquationKind.TWO_COEF:
            x, y, z = solution
            return self.a * x + self.b * y == self.a * z
        x, y, w, z = solution
        return x + y + w == z

    def __str__(self) -> str:
        return self.text
