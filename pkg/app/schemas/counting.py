"""
Counting Schemas
Solution-class tallies and the bichromatic region statistics
"""

import enum
from typing import List, Optional

from pydantic import BaseModel, Field, model_validator

from app.schemas.coloring import Coloring, MuStats, PairStats


class SolutionClass(str, enum.Enum):
    MONO = "mono"
    RAINBOW = "rainbow"


class ClassCounts(BaseModel):
    """Monochromatic / non-monochromatic / rainbow solution counts"""

    mono: int = Field(..., ge=0)
    nonmono: int = Field(..., ge=0, description="Neither monochromatic nor rainbow")
    rainbow: int = Field(0, ge=0, description="Always 0 for 2-colorings")
    total: int = Field(..., ge=0)

    @model_validator(mode="after")
    def check_partition(self) -> "ClassCounts":
        if self.mono + self.nonmono + self.rainbow != self.total:
            raise ValueError(
                f"Class counts {self.mono}+{self.nonmono}+{self.rainbow} "
                f"do not add up to {self.total}"
            )
        return self

    def of(self, klass: SolutionClass) -> int:
        return self.mono if klass == SolutionClass.MONO else self.rainbow


class RegionStats(BaseModel):
    """Bichromatic pair counts per region of [1, n] x [1, n // a]"""

    a: int = Field(..., ge=1)
    nx_minus: int = Field(..., description="x + a*y <= n, x > a*y")
    nx_plus: int = Field(..., description="x + a*y > n, x > a*y")
    ny_minus: int = Field(..., description="x + a*y <= n, x < a*y")
    ny_plus: int = Field(..., description="x + a*y > n, x < a*y")
    diagonal: int = Field(..., description="x = a*y")
    diagonal_low: int = Field(..., description="x = a*y and x + a*y <= n")
    n_minus: Optional[int] = Field(None, description="N^- (a = 1 only)")
    n_plus: Optional[int] = Field(None, description="N^+ (a = 1 only)")
    d: int = Field(..., description="nx_minus - ny_plus (D for a = 1, D_a otherwise)")
    nu1: int = Field(..., description="Solutions with bichromatic (x, y)")
    nu2: int = Field(..., description="Solutions with bichromatic (y, z)")
    nu3: int = Field(..., description="Solutions with bichromatic (x, z)")

    @property
    def nu_total(self) -> int:
        return self.nu1 + self.nu2 + self.nu3

    @property
    def region_total(self) -> int:
        return self.nx_minus + self.nx_plus + self.ny_minus + self.ny_plus + self.diagonal


class CountRequest(BaseModel):
    """Request body for counting solutions on one coloring"""

    equation: str = Field("schur", examples=["schur", "x+ay=z:a=2"])
    runs: str = Field(..., min_length=1, examples=["R4 B6 R1"])
    r: Optional[int] = Field(None, ge=2, le=3)
    stats: bool = Field(False, description="Include mu, pair and region statistics")


class CountResponse(BaseModel):
    """Class counts of one coloring, with statistics on request"""

    equation: str
    coloring: Coloring
    counts: ClassCounts
    mu: Optional[MuStats] = None
    pairs: Optional[List[PairStats]] = None
    regions: Optional[RegionStats] = None
