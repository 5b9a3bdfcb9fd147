"""
Coloring Service
Construction of colorings and the per-color statistics the bounds are written in
"""

import logging
from typing import List, Optional, Sequence

import numpy as np
import sympy

from app.schemas.coloring import (
    BlockSpec,
    Color,
    Coloring,
    MuStats,
    PairStats,
    compress_runs,
    expand_runs,
)

logger = logging.getLogger(__name__)


class ColoringService:
    @staticmethod
    def from_blocks(n: int, spec: BlockSpec, r: Optional[int] = None) -> Coloring:
        """
        Realize a block specification on [1, n] by cumulative-floor rounding
        Block k occupies (floor(n*W_{k-1}/W), floor(n*W_k/W)]
        """
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")

        total = spec.total
        cells: List[int] = []
        prefix = sympy.Integer(0)
        boundary = 0
        for block in spec.blocks:
            prefix += block.weight
            # floor of an algebraic number is evaluated exactly by sympy
            upper = int(sympy.floor(n * prefix / total))
            cells.extend([int(block.color)] * (upper - boundary))
            boundary = upper

        colors_used = max(cells) + 1
        return Coloring(n=n, r=max(r or 2, colors_used), cells=tuple(cells))

    @staticmethod
    def parse_runlength(text: str, r: Optional[int] = None) -> Coloring:
        """Parse '<Letter><Count>' tokens; r defaults to 3 only when green appears"""
        cells = expand_runs(text)
        needed = 3 if Color.GREEN in cells else 2
        if r is not None and r < needed:
            raise ValueError(f"Coloring '{text}' uses {needed} colors but r = {r}")
        return Coloring(n=len(cells), r=r or needed, cells=cells)

    @staticmethod
    def format_runlength(coloring: Coloring) -> str:
        return compress_runs(coloring.cells)

    @staticmethod
    def mu_stats(coloring: Coloring, a: int = 1) -> MuStats:
        """Per-color counts over [1, n], [1, n // a] and (n // a, n]"""
        if a < 1:
            raise ValueError(f"Split parameter a must be positive, got {a}")
        split = coloring.n // a
        counts = np.bincount(np.asarray(coloring.cells, dtype=np.int64), minlength=coloring.r)
        lo = np.bincount(
            np.asarray(coloring.cells[:split], dtype=np.int64), minlength=coloring.r
        )
        return MuStats(
            a=a,
            split=split,
            mu=counts.tolist(),
            mu_lo=lo.tolist(),
            mu_hi=(counts - lo).tolist(),
        )

    @staticmethod
    def pair_stats(coloring: Coloring, length: int) -> PairStats:
        """
        Tally pairs {s, L+1-s} for 1 <= s <= L // 2 by (color of s, color of L+1-s)
        The middle element of an odd interval belongs to no pair
        """
        if length < 1 or length > coloring.n:
            raise ValueError(f"Pair interval length must lie in [1, {coloring.n}], got {length}")

        cells = np.asarray(coloring.cells, dtype=np.int64)
        half = length // 2
        smaller = cells[:half]
        larger = cells[length - half : length][::-1]
        matrix = np.zeros((coloring.r, coloring.r), dtype=np.int64)
        np.add.at(matrix, (smaller, larger), 1)
        return PairStats(
            n=coloring.n,
            length=length,
            mu_cc=matrix.tolist(),
            gamma_count=int(matrix.sum() - np.trace(matrix)),
        )

    @staticmethod
    def flip(coloring: Coloring, position: int, new_color: int) -> Coloring:
        """Copy of the coloring with the integer `position` recolored"""
        if not 1 <= position <= coloring.n:
            raise ValueError(f"Position {position} outside [1, {coloring.n}]")
        if not 0 <= new_color < coloring.r:
            raise ValueError(f"Color {new_color} not available with r = {coloring.r}")
        cells = list(coloring.cells)
        cells[position - 1] = int(new_color)
        return Coloring(n=coloring.n, r=coloring.r, cells=tuple(cells))

    @staticmethod
    def random_coloring(n: int, r: int, rng: np.random.Generator) -> Coloring:
        cells = rng.integers(0, r, size=n)
        return Coloring(n=n, r=r, cells=tuple(int(c) for c in cells))

    @staticmethod
    def swap_colors(coloring: Coloring) -> Coloring:
        """Exchange red and blue; green cells are unchanged"""
        swap = {Color.RED: Color.BLUE, Color.BLUE: Color.RED, Color.GREEN: Color.GREEN}
        return Coloring(
            n=coloring.n,
            r=coloring.r,
            cells=tuple(int(swap[Color(c)]) for c in coloring.cells),
        )

    @staticmethod
    def from_cells(cells: Sequence[int], r: int) -> Coloring:
        return Coloring(n=len(cells), r=r, cells=tuple(int(c) for c in cells))


from_blocks = ColoringService.from_blocks
parse_runlength = ColoringService.parse_runlength
format_runlength = ColoringService.format_runlength
mu_stats = ColoringService.mu_stats
pair_stats = ColoringService.pair_stats
flip = ColoringService.flip
random_coloring = ColoringService.random_coloring
swap_colors = ColoringService.swap_colors
