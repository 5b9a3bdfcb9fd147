"""
Shared fixtures and brute-force oracles
The oracles loop over raw definitions and never touch the services' tables
"""

import itertools
from typing import List, Tuple

import numpy as np
import pytest

from app.schemas.coloring import Coloring
from app.schemas.equation import Equation, EquationKind


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def make_coloring(cells, r: int = 2) -> Coloring:
    return Coloring(n=len(cells), r=r, cells=tuple(int(c) for c in cells))


def naive_solutions(eq: Equation, n: int) -> List[Tuple[int, ...]]:
    """Every solution in [1, n] under the counting conventions, by filtering all tuples"""
    values = range(1, n + 1)
    if eq.kind == EquationKind.FOUR_VAR:
        return [
            (x, y, w, z)
            for x, y, w, z in itertools.product(values, repeat=4)
            if x + y + w == z and x <= y <= w
        ]
    found = []
    for x, y, z in itertools.product(values, repeat=3):
        if eq.kind == EquationKind.SCHUR_LIKE:
            if x + eq.a * y == z and (eq.a > 1 or x <= y):
                found.append((x, y, z))
        elif eq.a * x + eq.b * y == eq.a * z:
            found.append((x, y, z))
    return found


def naive_counts(coloring: Coloring, eq: Equation) -> Tuple[int, int]:
    """(mono, rainbow) by checking each solution's colors"""
    mono = rainbow = 0
    for solution in naive_solutions(eq, coloring.n):
        colors = [coloring.color_of(v) for v in solution]
        if len(set(colors)) == 1:
            mono += 1
        elif len(colors) == 3 and len(set(colors)) == 3:
            rainbow += 1
    return mono, rainbow


def naive_regions(coloring: Coloring, a: int) -> dict:
    """Bichromatic points (x, y), 1 <= x <= n, 1 <= y <= n // a, per region"""
    n = coloring.n
    regions = dict.fromkeys(["nx_minus", "nx_plus", "ny_minus", "ny_plus", "diagonal"], 0)
    for x in range(1, n + 1):
        for y in range(1, n // a + 1):
            if coloring.color_of(x) == coloring.color_of(y):
                continue
            low = x + a * y <= n
            if x == a * y:
                regions["diagonal"] += 1
            elif x > a * y:
                regions["nx_minus" if low else "nx_plus"] += 1
            else:
                regions["ny_minus" if low else "ny_plus"] += 1
    return regions


def naive_direct_product(coloring: Coloring, a: int, cc, ee) -> int:
    n = coloring.n
    length = n // a
    total = 0
    for x in range(1, n // 2 + 1):
        if (coloring.color_of(x), coloring.color_of(n + 1 - x)) != tuple(cc):
            continue
        for y in range(1, length // 2 + 1):
            if a * y < x and (
                coloring.color_of(y),
                coloring.color_of(length + 1 - y),
            ) == tuple(ee):
                total += 1
    return total


def all_colorings(n: int, r: int = 2):
    for cells in itertools.product(range(r), repeat=n):
        yield make_coloring(cells, r)
