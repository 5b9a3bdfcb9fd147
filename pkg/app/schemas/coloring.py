"""
Coloring Schemas
Pydantic models for colorings of [1, n] and the statistics computed on them
"""

import enum
import itertools
import re
from fractions import Fraction
from typing import Any, List, Tuple, Union

import sympy
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    field_validator,
    model_serializer,
    model_validator,
)


class Color(enum.IntEnum):
    RED = 0
    BLUE = 1
    GREEN = 2

    @property
    def letter(self) -> str:
        return self.name[0]

    @classmethod
    def from_letter(cls, letter: str) -> "Color":
        for color in cls:
            if color.letter == letter.upper():
                return color
        raise ValueError(f"Unknown color letter '{letter}'")


_RUN_TOKEN = re.compile(r"^([A-Za-z])(\d+)$")


def expand_runs(text: str) -> Tuple[int, ...]:
    """Expand run-length text such as 'R4 B6 R1' into cell colors"""
    tokens = text.split()
    if not tokens:
        raise ValueError("Empty run-length coloring")

    cells: List[int] = []
    for token in tokens:
        match = _RUN_TOKEN.match(token)
        if not match:
            raise ValueError(f"Malformed run-length token '{token}'")
        color = Color.from_letter(match.group(1))
        count = int(match.group(2))
        if count == 0:
            raise ValueError(f"Zero-length run in token '{token}'")
        cells.extend([int(color)] * count)
    return tuple(cells)


def parse_pattern(text: str) -> List[Color]:
    """Block pattern such as 'RBR' or 'R,B,R'"""
    letters = [c for c in text if not c.isspace() and c != ","]
    if not letters:
        raise ValueError("Empty block pattern")
    return [Color.from_letter(letter) for letter in letters]


def compress_runs(cells: Tuple[int, ...]) -> str:
    """Maximal runs of a cell sequence in run-length text"""
    return " ".join(
        f"{Color(color).letter}{len(list(group))}"
        for color, group in itertools.groupby(cells)
    )


class Coloring(BaseModel):
    """Assignment of one of r colors to each integer in [1, n]; cell i is integer i+1"""

    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1)
    r: int = Field(2, ge=2, le=3)
    cells: Tuple[int, ...]

    @model_validator(mode="before")
    @classmethod
    def accept_runs(cls, data: Any) -> Any:
        # JSON form {"n": 11, "r": 2, "runs": "R4 B6 R1"}
        if isinstance(data, dict) and "runs" in data and "cells" not in data:
            data = dict(data)
            data["cells"] = expand_runs(data.pop("runs"))
        return data

    @model_validator(mode="after")
    def check_cells(self) -> "Coloring":
        if len(self.cells) != self.n:
            raise ValueError(
                f"Coloring has {len(self.cells)} cells but n = {self.n}"
            )
        if any(cell < 0 or cell >= self.r for cell in self.cells):
            raise ValueError(f"Cell colors must lie in [0, {self.r - 1}]")
        return self

    @model_serializer
    def serialize(self) -> dict:
        return {"n": self.n, "r": self.r, "runs": self.runs}

    @property
    def runs(self) -> str:
        return compress_runs(self.cells)

    def color_of(self, position: int) -> int:
        """Color of the integer `position` (1-based)"""
        return self.cells[position - 1]

    def counts(self) -> List[int]:
        return [self.cells.count(color) for color in range(self.r)]

    def __str__(self) -> str:
        return self.runs


Weight = Union[int, Fraction, str, sympy.Expr]


class Block(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    color: Color
    weight: sympy.Expr

    @field_validator("weight", mode="before")
    @classmethod
    def exact_weight(cls, value: Weight) -> sympy.Expr:
        if isinstance(value, Fraction):
            value = sympy.Rational(value.numerator, value.denominator)
        weight = sympy.sympify(value)
        if weight.is_Float:
            weight = sympy.nsimplify(weight)
        if weight.is_negative:
            raise ValueError(f"Block weight must be nonnegative, got {weight}")
        return weight


class BlockSpec(BaseModel):
    """Ordered blocks with exact (rational or algebraic) weights"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    blocks: List[Block] = Field(..., min_length=1)
    rounding: str = Field("cumulative-floor", pattern="^cumulative-floor$")

    @model_validator(mode="after")
    def positive_total(self) -> "BlockSpec":
        if not self.total.is_positive:
            raise ValueError("Block weights must sum to a positive value")
        return self

    @property
    def total(self) -> sympy.Expr:
        return sympy.Add(*(block.weight for block in self.blocks))

    @classmethod
    def of(cls, *blocks: Tuple[Color, Weight]) -> "BlockSpec":
        return cls(blocks=[Block(color=color, weight=weight) for color, weight in blocks])


class MuStats(BaseModel):
    """Per-color counts over [1, n], [1, n//a] and (n//a, n]"""

    a: int = Field(..., ge=1)
    split: int = Field(..., description="Split point n // a")
    mu: List[int]
    mu_lo: List[int]
    mu_hi: List[int]


class PairStats(BaseModel):
    """Counts of symmetric pairs {s, L+1-s} by ordered color pattern"""

    n: int
    length: int = Field(..., ge=1, description="Interval length L")
    mu_cc: List[List[int]] = Field(
        ..., description="mu_cc[C][C'] counts pairs with s colored C and L+1-s colored C'"
    )
    gamma_count: int = Field(..., description="Number of bichromatic pairs")

    @property
    def pairs(self) -> int:
        return sum(sum(row) for row in self.mu_cc)

    @property
    def gamma(self) -> float:
        """Bichromatic pairs as a fraction of n"""
        return self.gamma_count / self.n

    def count(self, first: Color, second: Color) -> int:
        return self.mu_cc[first][second]
