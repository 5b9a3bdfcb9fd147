"""
Counting Service
Exact solution-class counters, single-cell deltas and the bichromatic region statistics
"""

import logging
from fractions import Fraction
from typing import Callable, MutableSequence, Optional, Sequence, Tuple

import numpy as np

from app.core.errors import VerificationError
from app.schemas.coloring import Color, Coloring
from app.schemas.counting import ClassCounts, CountResponse, RegionStats, SolutionClass
from app.schemas.equation import Equation, EquationKind
from app.services.coloring_service import ColoringService
from app.services.equation_service import EquationService

logger = logging.getLogger(__name__)

ColorPair = Tuple[int, int]
Counter = Callable[[Sequence[int], Sequence[Tuple[int, ...]]], int]


def make_counter(klass: SolutionClass, arity: int) -> Counter:
    """Counter of mono (or rainbow) solutions among 0-based index rows"""
    if klass == SolutionClass.RAINBOW:
        if arity != 3:
            raise ValueError("Rainbow solutions are defined for three-variable equations only")
        return lambda c, rows: sum(
            1 for x, y, z in rows if c[x] != c[y] and c[x] != c[z] and c[y] != c[z]
        )
    if arity == 3:
        return lambda c, rows: sum(1 for x, y, z in rows if c[x] == c[y] == c[z])
    return lambda c, rows: sum(1 for x, y, w, z in rows if c[x] == c[y] == c[w] == c[z])


def apply_delta(
    cells: MutableSequence[int],
    rows: Sequence[Tuple[int, ...]],
    index: int,
    new_color: int,
    counter: Counter,
) -> int:
    """Change in `counter` when cell `index` is recolored; the cell is left recolored"""
    before = counter(cells, rows)
    cells[index] = new_color
    return counter(cells, rows) - before


def _require_two_colors(coloring: Coloring) -> None:
    if coloring.r != 2:
        raise ValueError(f"Region statistics need a 2-coloring, got r = {coloring.r}")


def _require_schur_like(eq: Equation) -> None:
    if eq.kind != EquationKind.SCHUR_LIKE:
        raise ValueError(f"Region statistics are defined for x+ay=z only, got {eq.text}")


def _blue_prefix(coloring: Coloring) -> np.ndarray:
    """prefix[k] = number of blue integers in [1, k]"""
    cells = np.asarray(coloring.cells, dtype=np.int64)
    return np.concatenate([[0], np.cumsum(cells == Color.BLUE)])


class CountingService:
    @staticmethod
    def count_classes(
        coloring: Coloring, eq: Equation, *, rainbow: Optional[bool] = None
    ) -> ClassCounts:
        """
        Count monochromatic, rainbow and remaining solutions by full enumeration
        Rainbow counts default to on for 3-colorings of three-variable equations
        """
        if rainbow is None:
            rainbow = coloring.r == 3 and eq.arity == 3
        if rainbow and coloring.r != 3:
            raise ValueError("Rainbow counts need a 3-coloring")
        if rainbow and eq.arity != 3:
            raise ValueError(f"Rainbow counts are not defined for {eq.text}")

        table = EquationService.solution_table(eq, coloring.n)
        total = len(table)
        expected = EquationService.total_count(eq, coloring.n)
        if total != expected:
            raise VerificationError(
                f"{eq.text}, n={coloring.n}: enumerated {total} solutions, closed form {expected}"
            )
        if total == 0:
            return ClassCounts(mono=0, nonmono=0, rainbow=0, total=0)

        colors = np.asarray(coloring.cells, dtype=np.int64)[table - 1]
        mono = int((colors == colors[:, :1]).all(axis=1).sum())
        rainbow_count = 0
        if rainbow:
            c0, c1, c2 = colors[:, 0], colors[:, 1], colors[:, 2]
            rainbow_count = int(((c0 != c1) & (c0 != c2) & (c1 != c2)).sum())

        return ClassCounts(
            mono=mono,
            nonmono=total - mono - rainbow_count,
            rainbow=rainbow_count,
            total=total,
        )

    @staticmethod
    def class_value(coloring: Coloring, eq: Equation, klass: SolutionClass) -> int:
        counts = CountingService.count_classes(
            coloring, eq, rainbow=klass == SolutionClass.RAINBOW
        )
        return counts.of(klass)

    @staticmethod
    def packed_mono_count(coloring: Coloring, eq: Equation) -> int:
        """
        Monochromatic count from per-color bit masks (bit i set when integer i has the color)
        Each shift-and-popcount handles one value of the y variable at once
        """
        if eq.kind == EquationKind.FOUR_VAR:
            raise ValueError("Packed counting covers three-variable equations only")

        n = coloring.n
        total = 0
        for color in range(coloring.r):
            bits = "".join("1" if c == color else "0" for c in reversed(coloring.cells))
            mask = int(bits + "0", 2)
            if eq.kind == EquationKind.SCHUR_LIKE:
                for y in range(1, (n - 1) // eq.a + 1):
                    if mask >> y & 1:
                        total += (mask & (mask >> (eq.a * y))).bit_count()
            else:
                steps = min((n - 1) // eq.b, n // eq.a)
                for t in range(1, steps + 1):
                    if mask >> (eq.a * t) & 1:
                        total += (mask & (mask >> (eq.b * t))).bit_count()

        if eq.kind == EquationKind.SCHUR_LIKE and eq.a == 1:
            # ordered pairs count x != y twice; add the doubles once more and halve
            doubles = sum(
                1
                for u in range(1, n // 2 + 1)
                if coloring.cells[u - 1] == coloring.cells[2 * u - 1]
            )
            total = (total + doubles) // 2
        return total

    @staticmethod
    def class_delta(
        coloring: Coloring,
        eq: Equation,
        position: int,
        new_color: int,
        klass: SolutionClass = SolutionClass.MONO,
    ) -> int:
        """Change in the class count after recoloring `position`, scanning only its solutions"""
        if not 1 <= position <= coloring.n:
            raise ValueError(f"Position {position} outside [1, {coloring.n}]")
        if not 0 <= new_color < coloring.r:
            raise ValueError(f"Color {new_color} not available with r = {coloring.r}")
        if klass == SolutionClass.RAINBOW and coloring.r != 3:
            raise ValueError("Rainbow counts need a 3-coloring")

        rows = EquationService.incidence(eq, coloring.n)[position - 1]
        cells = list(coloring.cells)
        return apply_delta(cells, rows, position - 1, new_color, make_counter(klass, eq.arity))

    @staticmethod
    def mono_delta(coloring: Coloring, eq: Equation, position: int, new_color: int) -> int:
        return CountingService.class_delta(coloring, eq, position, new_color)

    @staticmethod
    def region_stats(coloring: Coloring, eq: Equation) -> RegionStats:
        """Bichromatic pair counts in each region cut out by x + a*y = n and x = a*y"""
        _require_two_colors(coloring)
        _require_schur_like(eq)

        n, a = coloring.n, eq.a
        length = n // a
        prefix = _blue_prefix(coloring)
        cells = np.asarray(coloring.cells, dtype=np.int64)
        xs = np.arange(1, n + 1)

        def bichromatic(lo: np.ndarray, hi: np.ndarray) -> int:
            hi = np.minimum(hi, length)
            valid = hi >= lo
            upper = np.where(valid, hi, 0)
            lower = np.where(valid, lo - 1, 0)
            blue = prefix[upper] - prefix[lower]
            size = upper - lower
            return int(np.where(cells == Color.RED, blue, size - blue).sum())

        below = (n - xs) // a
        left = (xs - 1) // a
        ones = np.ones_like(xs)
        nx_minus = bichromatic(ones, np.minimum(left, below))
        nx_plus = bichromatic(below + 1, left)
        ny_minus = bichromatic(xs // a + 1, below)
        ny_plus = bichromatic(np.maximum(xs // a, below) + 1, np.full_like(xs, length))

        ys = np.arange(1, length + 1)
        on_diagonal = cells[a * ys - 1] != cells[ys - 1]
        diagonal = int(on_diagonal.sum())
        diagonal_low = int((on_diagonal & (2 * a * ys <= n)).sum())

        table = EquationService.solution_table(eq, n)
        colors = cells[table - 1] if len(table) else np.empty((0, 3), dtype=np.int64)

        return RegionStats(
            a=a,
            nx_minus=nx_minus,
            nx_plus=nx_plus,
            ny_minus=ny_minus,
            ny_plus=ny_plus,
            diagonal=diagonal,
            diagonal_low=diagonal_low,
            n_minus=nx_minus if a == 1 else None,
            n_plus=ny_plus if a == 1 else None,
            d=nx_minus - ny_plus,
            nu1=int((colors[:, 0] != colors[:, 1]).sum()),
            nu2=int((colors[:, 1] != colors[:, 2]).sum()),
            nu3=int((colors[:, 0] != colors[:, 2]).sum()),
        )

    @staticmethod
    def direct_product(coloring: Coloring, a: int, cc: ColorPair, ee: ColorPair) -> int:
        """
        Count pairs X = {x, n+1-x} (x <= n/2) colored cc and Y = {y, L+1-y} (y <= L/2,
        L = n // a) colored ee, with a*y < x; colors are listed smaller element first
        """
        _require_two_colors(coloring)
        if a < 1:
            raise ValueError(f"a must be positive, got {a}")

        n = coloring.n
        length = n // a
        cells = np.asarray(coloring.cells, dtype=np.int64)

        xs = np.arange(1, n // 2 + 1)
        x_match = (cells[xs - 1] == cc[0]) & (cells[n - xs] == cc[1])

        ys = np.arange(1, length // 2 + 1)
        y_match = (cells[ys - 1] == ee[0]) & (cells[length - ys] == ee[1])
        y_prefix = np.concatenate([[0], np.cumsum(y_match)])

        reach = np.minimum((xs - 1) // a, length // 2)
        return int(y_prefix[reach][x_match].sum())

    @staticmethod
    def product_rhs(coloring: Coloring, a: int = 2) -> int:
        """2(RR x BR) + 2(BB x RB) - 2(RR x RB) - 2(BB x BR)"""
        R, B = Color.RED, Color.BLUE
        product = CountingService.direct_product
        return (
            2 * product(coloring, a, (R, R), (B, R))
            + 2 * product(coloring, a, (B, B), (R, B))
            - 2 * product(coloring, a, (R, R), (R, B))
            - 2 * product(coloring, a, (B, B), (B, R))
        )

    @staticmethod
    def d2_identity_residual(coloring: Coloring, a: int = 2) -> int:
        """D_a minus its direct-product expansion"""
        stats = CountingService.region_stats(coloring, Equation.schur(a))
        return stats.d - CountingService.product_rhs(coloring, a)

    @staticmethod
    def d_boundary_defect(coloring: Coloring, a: int = 2) -> int:
        """
        Bichromatic N_x^- points not covered by any (X, Y) combination minus the
        uncovered bichromatic N_y^+ points; equals d2_identity_residual exactly
        """
        _require_two_colors(coloring)
        stats = CountingService.region_stats(coloring, Equation.schur(a))

        n = coloring.n
        length = n // a
        cells = np.asarray(coloring.cells, dtype=np.int64)
        prefix = _blue_prefix(coloring)
        # top[k] = number of blue integers among L, L-1, ..., L+1-k
        top = prefix[length] - prefix[length - np.arange(0, length + 1)]

        half = n // 2
        xs = np.arange(1, n + 1)
        mirror = np.where(xs <= half, xs, n + 1 - xs)
        paired = (xs <= half) | (xs > n - half)
        reach = np.where(paired, np.minimum(length // 2, (mirror - 1) // a), 0)

        red = cells == Color.RED
        covered_x = int(np.where(red, prefix[reach], reach - prefix[reach]).sum())
        covered_y = int(np.where(red, top[reach], reach - top[reach]).sum())
        return (stats.nx_minus - covered_x) - (stats.ny_plus - covered_y)

    @staticmethod
    def d_bound_slack(coloring: Coloring) -> int:
        """floor(mu_B^2 / 4) - D with colors relabeled so that mu_B >= mu_R"""
        _require_two_colors(coloring)
        mu = ColoringService.mu_stats(coloring).mu
        # D only sees bichromatic pairs, so the relabeling leaves it unchanged
        mu_b = max(mu)
        stats = CountingService.region_stats(coloring, Equation.schur(1))
        return mu_b * mu_b // 4 - stats.d

    @staticmethod
    def doubling_pairs(coloring: Coloring) -> int:
        """Number of bichromatic pairs {u, 2u}"""
        return sum(
            1
            for u in range(1, coloring.n // 2 + 1)
            if coloring.cells[u - 1] != coloring.cells[2 * u - 1]
        )

    @staticmethod
    def nonmono_estimate(coloring: Coloring, eq: Equation) -> Fraction:
        """
        a = 1: (2 mu_R mu_B - |N^+|) / 2
        a >= 2: (mu_R mu_B / a + mu_R mu_B1 + mu_B mu_R1 + D_a) / 2
        """
        _require_two_colors(coloring)
        _require_schur_like(eq)
        stats = CountingService.region_stats(coloring, eq)
        mu = ColoringService.mu_stats(coloring, eq.a)
        mu_r, mu_b = mu.mu[Color.RED], mu.mu[Color.BLUE]
        if eq.a == 1:
            return Fraction(2 * mu_r * mu_b - stats.ny_plus, 2)
        return (
            Fraction(mu_r * mu_b, eq.a)
            + mu_r * mu.mu_lo[Color.BLUE]
            + mu_b * mu.mu_lo[Color.RED]
            + stats.d
        ) / 2

    @staticmethod
    def summarize(coloring: Coloring, eq: Equation, stats: bool = False) -> CountResponse:
        """Class counts plus, on request, the mu, pair and region statistics"""
        response = CountResponse(
            equation=eq.text,
            coloring=coloring,
            counts=CountingService.count_classes(coloring, eq),
        )
        if not stats:
            return response

        a = eq.a if eq.kind == EquationKind.SCHUR_LIKE else 1
        lengths = sorted({coloring.n, max(1, coloring.n // a)}, reverse=True)
        response.mu = ColoringService.mu_stats(coloring, a)
        response.pairs = [ColoringService.pair_stats(coloring, length) for length in lengths]
        if coloring.r == 2 and eq.kind == EquationKind.SCHUR_LIKE:
            response.regions = CountingService.region_stats(coloring, eq)
        return response


count_classes = CountingService.count_classes
packed_mono_count = CountingService.packed_mono_count
class_delta = CountingService.class_delta
mono_delta = CountingService.mono_delta
region_stats = CountingService.region_stats
direct_product = CountingService.direct_product
d2_identity_residual = CountingService.d2_identity_residual
d_boundary_defect = CountingService.d_boundary_defect
d_bound_slack = CountingService.d_bound_slack
nonmono_estimate = CountingService.nonmono_estimate
