"""
Equation Service
Solution enumeration under the pinned counting conventions
"""

import functools
import logging
from typing import Iterator, List, Tuple

import numpy as np

from app.core.config import settings
from app.schemas.equation import Equation, EquationKind, Solution

logger = logging.getLogger(__name__)

# Per-position solutions as 0-based cell index tuples
Incidence = Tuple[Tuple[Tuple[int, ...], ...], ...]


class EquationService:
    @staticmethod
    def solutions(eq: Equation, n: int) -> Iterator[Solution]:
        """
        Enumerate every solution in [1, n] exactly once
        x + y = z and x + y + w = z emit sorted addends; other families are ordered
        """
        for solution in EquationService._enumerate(eq, n):
            if settings.DEBUG:
                EquationService._check(eq, n, solution)
            yield solution

    @staticmethod
    def _enumerate(eq: Equation, n: int) -> Iterator[Solution]:
        if eq.kind == EquationKind.SCHUR_LIKE and eq.a == 1:
            for x in range(1, n // 2 + 1):
                for y in range(x, n - x + 1):
                    yield (x, y, x + y)
        elif eq.kind == EquationKind.SCHUR_LIKE:
            a = eq.a
            for y in range(1, (n - 1) // a + 1):
                for x in range(1, n - a * y + 1):
                    yield (x, y, x + a * y)
        elif eq.kind == EquationKind.TWO_COEF:
            # a | b*y with gcd(a, b) = 1 forces y = a*t and z = x + b*t
            for t in range(1, EquationService._two_coef_steps(eq, n) + 1):
                for x in range(1, n - eq.b * t + 1):
                    yield (x, eq.a * t, x + eq.b * t)
        else:
            for x in range(1, n // 3 + 1):
                for y in range(x, (n - x) // 2 + 1):
                    for w in range(y, n - x - y + 1):
                        yield (x, y, w, x + y + w)

    @staticmethod
    def _check(eq: Equation, n: int, solution: Solution) -> None:
        if len(solution) != eq.arity or not eq.satisfied_by(solution):
            raise AssertionError(f"{solution} does not solve {eq.text}")
        if any(value < 1 or value > n for value in solution):
            raise AssertionError(f"{solution} leaves [1, {n}]")

    @staticmethod
    def _two_coef_steps(eq: Equation, n: int) -> int:
        return max(0, min((n - 1) // eq.b, n // eq.a))

    @staticmethod
    def total_count(eq: Equation, n: int) -> int:
        """Closed-form number of solutions in [1, n]"""
        if n < 1:
            return 0
        if eq.kind == EquationKind.SCHUR_LIKE and eq.a == 1:
            return n * n // 4
        if eq.kind == EquationKind.SCHUR_LIKE:
            m = (n - 1) // eq.a
            return m * n - eq.a * m * (m + 1) // 2
        if eq.kind == EquationKind.TWO_COEF:
            t = EquationService._two_coef_steps(eq, n)
            return t * n - eq.b * t * (t + 1) // 2
        # partitions of s into three positive parts number round(s^2 / 12)
        return sum((s * s + 6) // 12 for s in range(3, n + 1))

    @staticmethod
    @functools.lru_cache(maxsize=64)
    def solution_table(eq: Equation, n: int) -> np.ndarray:
        """All solutions as an int64 array of shape (count, arity), in enumeration order"""
        chunks: List[np.ndarray] = []
        if eq.kind == EquationKind.SCHUR_LIKE and eq.a == 1:
            for x in range(1, n // 2 + 1):
                y = np.arange(x, n - x + 1)
                chunks.append(np.column_stack([np.full_like(y, x), y, x + y]))
        elif eq.kind == EquationKind.SCHUR_LIKE:
            for y in range(1, (n - 1) // eq.a + 1):
                x = np.arange(1, n - eq.a * y + 1)
                chunks.append(np.column_stack([x, np.full_like(x, y), x + eq.a * y]))
        elif eq.kind == EquationKind.TWO_COEF:
            for t in range(1, EquationService._two_coef_steps(eq, n) + 1):
                x = np.arange(1, n - eq.b * t + 1)
                chunks.append(
                    np.column_stack([x, np.full_like(x, eq.a * t), x + eq.b * t])
                )
        else:
            for x in range(1, n // 3 + 1):
                for y in range(x, (n - x) // 2 + 1):
                    w = np.arange(y, n - x - y + 1)
                    chunks.append(
                        np.column_stack(
                            [np.full_like(w, x), np.full_like(w, y), w, x + y + w]
                        )
                    )

        if not chunks:
            empty = np.empty((0, eq.arity), dtype=np.int64)
            empty.flags.writeable = False
            return empty
        table = np.concatenate(chunks).astype(np.int64)
        table.flags.writeable = False
        logger.debug(f"Built solution table for {eq.text}, n={n}: {len(table)} rows")
        return table

    @staticmethod
    @functools.lru_cache(maxsize=64)
    def incidence(eq: Equation, n: int) -> Incidence:
        """For each cell, the solutions containing it (each solution listed once)"""
        buckets: List[List[Tuple[int, ...]]] = [[] for _ in range(n)]
        for row in EquationService.solution_table(eq, n).tolist():
            cells = tuple(value - 1 for value in row)
            for cell in set(cells):
                buckets[cell].append(cells)
        return tuple(tuple(bucket) for bucket in buckets)


solutions = EquationService.solutions
total_count = EquationService.total_count
solution_table = EquationService.solution_table
incidence = EquationService.incidence
