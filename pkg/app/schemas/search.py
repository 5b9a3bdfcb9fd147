"""
Search Schemas
Objectives and the reports produced by every search mode
"""

import enum
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from app.schemas.coloring import Coloring
from app.schemas.counting import SolutionClass
from app.schemas.equation import Equation


class Direction(str, enum.Enum):
    MIN = "min"
    MAX = "max"


class SearchMode(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    LOCAL = "local"
    SWEEP = "sweep"


class Objective(BaseModel):
    model_config = ConfigDict(frozen=True)

    equation: Equation
    klass: SolutionClass = SolutionClass.MONO
    direction: Direction = Direction.MIN

    @classmethod
    def parse(cls, text: str, equation: Equation) -> "Objective":
        """Parse 'min-mono', 'max-rainbow', ..."""
        direction, _, klass = text.strip().lower().partition("-")
        try:
            return cls(
                equation=equation,
                klass=SolutionClass(klass),
                direction=Direction(direction),
            )
        except ValueError:
            raise ValueError(
                f"Unknown objective '{text}' (expected min|max-mono|rainbow)"
            ) from None

    @property
    def text(self) -> str:
        return f"{self.direction.value}-{self.klass.value}"

    @property
    def sign(self) -> int:
        """+1 when smaller values are better"""
        return 1 if self.direction == Direction.MIN else -1

    def better(self, value: int, incumbent: Optional[int]) -> bool:
        return incumbent is None or self.sign * value < self.sign * incumbent

    def check_colors(self, r: int) -> None:
        if self.klass == SolutionClass.RAINBOW and r != 3:
            raise ValueError("Rainbow objectives need r = 3")


class ExtremumReport(BaseModel):
    """Extremal value, capped witness list and search bookkeeping"""

    mode: SearchMode
    equation: str
    objective: str
    n: int
    r: int
    best_value: int
    witnesses: List[Coloring] = []
    multiplicity: Optional[int] = Field(
        None, description="Optimal colorings in the explored space (exhaustive only)"
    )
    explored: int = Field(..., description="Colorings evaluated")
    space_size: Optional[int] = None
    symmetry_reduced: bool = False
    constraint: Optional[List[int]] = None
    heuristic: bool = False
    boundaries: Optional[List[Tuple[int, ...]]] = None
    wall_seconds: float = 0.0


class SearchRequest(BaseModel):
    """Request body for a bounded search"""

    equation: str = "schur"
    n: int = Field(..., ge=1)
    r: int = Field(2, ge=2, le=3)
    objective: str = Field("min-mono", examples=["min-mono", "max-rainbow"])
    mode: SearchMode = SearchMode.EXHAUSTIVE
    constraint: Optional[List[int]] = None
    budget: Optional[int] = Field(None, ge=1)
    restarts: Optional[int] = Field(None, ge=0)
    seed: Optional[int] = None
    pattern: Optional[str] = Field(None, examples=["RBR"])
    granularity: int = Field(1, ge=1)
