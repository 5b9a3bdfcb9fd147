"""
Search Service
Exhaustive, constrained, local and block-sweep searches for extremal colorings
"""

import bisect
import itertools
import logging
import math
import time
from multiprocessing import Pool
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.errors import BudgetExceededError
from app.schemas.coloring import Color, Coloring, parse_pattern
from app.schemas.counting import SolutionClass
from app.schemas.equation import Equation
from app.schemas.search import ExtremumReport, Objective, SearchMode, SearchRequest
from app.services.counting_service import CountingService, apply_delta, make_counter
from app.services.equation_service import EquationService

logger = logging.getLogger(__name__)

Cells = Tuple[int, ...]


def gray_changes(length: int, radix: int) -> Iterator[Tuple[int, int]]:
    """
    Reflected mixed-radix Gray code over `length` digits, starting from all zeros
    Yields (digit index, new digit value) for each of the radix**length - 1 steps
    """
    digits = [0] * length
    directions = [1] * length
    focus = list(range(length + 1))
    while True:
        j = focus[0]
        focus[0] = 0
        if j == length:
            return
        digits[j] += directions[j]
        yield j, digits[j]
        if digits[j] == 0 or digits[j] == radix - 1:
            directions[j] = -directions[j]
            focus[j] = focus[j + 1]
            focus[j + 1] = j + 1


def revolving_door(n: int, k: int, backwards: bool = False) -> Iterator[int]:
    """k-subsets of n bits as masks; consecutive masks differ by one element swapped"""
    if k < 0 or k > n:
        return
    if k == 0:
        yield 0
        return
    if k == n:
        yield (1 << n) - 1
        return

    top = 1 << (n - 1)
    if not backwards:
        yield from revolving_door(n - 1, k)
        for mask in revolving_door(n - 1, k - 1, backwards=True):
            yield mask | top
    else:
        for mask in revolving_door(n - 1, k - 1):
            yield mask | top
        yield from revolving_door(n - 1, k, backwards=True)


class _Tracker:
    """Best value, lexicographically smallest witnesses and multiplicity"""

    def __init__(self, sign: int, cap: int, progress_interval: int = 0, label: str = ""):
        self.sign = sign
        self.cap = cap
        self.progress_interval = progress_interval
        self.label = label
        self.best: Optional[int] = None
        self.witnesses: List[Cells] = []
        self.multiplicity = 0
        self.explored = 0

    def visit(self, value: int, cells: Sequence[int]) -> None:
        self.explored += 1
        if self.progress_interval and self.explored % self.progress_interval == 0:
            logger.info(f"{self.label} explored {self.explored} colorings, best {self.best}")

        if self.best is None or self.sign * value < self.sign * self.best:
            self.best = value
            self.witnesses = [tuple(cells)]
            self.multiplicity = 1
        elif value == self.best:
            self.multiplicity += 1
            self._keep(tuple(cells))

    def _keep(self, key: Cells) -> None:
        if len(self.witnesses) >= self.cap and key >= self.witnesses[-1]:
            return
        position = bisect.bisect_left(self.witnesses, key)
        if position < len(self.witnesses) and self.witnesses[position] == key:
            return
        self.witnesses.insert(position, key)
        del self.witnesses[self.cap :]


class _PartitionResult(NamedTuple):
    best: Optional[int]
    witnesses: List[Cells]
    multiplicity: int
    explored: int


class _PartitionTask(NamedTuple):
    eq: Equation
    klass: SolutionClass
    sign: int
    r: int
    base: Cells
    free: Tuple[int, ...]
    cap: int
    incremental: bool
    progress_interval: int
    label: str


def _all_rows(eq: Equation, n: int) -> List[Cells]:
    return [tuple(v - 1 for v in row) for row in EquationService.solution_table(eq, n).tolist()]


def _search_partition(task: _PartitionTask) -> _PartitionResult:
    """Gray-code enumeration of the free cells on top of a fixed base coloring"""
    n = len(task.base)
    cells = list(task.base)
    counter = make_counter(task.klass, task.eq.arity)
    incidence = EquationService.incidence(task.eq, n)
    rows = _all_rows(task.eq, n)

    tracker = _Tracker(task.sign, task.cap, task.progress_interval, task.label)
    value = counter(cells, rows)
    tracker.visit(value, cells)
    for j, digit in gray_changes(len(task.free), task.r):
        i = task.free[j]
        if task.incremental:
            value += apply_delta(cells, incidence[i], i, digit, counter)
        else:
            cells[i] = digit
            value = counter(cells, rows)
        tracker.visit(value, cells)
    return _PartitionResult(tracker.best, tracker.witnesses, tracker.multiplicity, tracker.explored)


def _merge(sign: int, cap: int, parts: Sequence[_PartitionResult]) -> _PartitionResult:
    values = [part.best for part in parts if part.best is not None]
    best = min(values, key=lambda v: sign * v)
    winners = [part for part in parts if part.best == best]
    witnesses = sorted(set(itertools.chain.from_iterable(part.witnesses for part in winners)))
    return _PartitionResult(
        best=best,
        witnesses=witnesses[:cap],
        multiplicity=sum(part.multiplicity for part in winners),
        explored=sum(part.explored for part in parts),
    )


class SearchService:
    """Search front door; worker counts and budgets come from settings unless given"""

    def __init__(
        self,
        budget: Optional[int] = None,
        threads: Optional[int] = None,
        split_cells: Optional[int] = None,
        witness_cap: Optional[int] = None,
        progress_interval: Optional[int] = None,
    ):
        self.budget = budget if budget is not None else settings.SEARCH_BUDGET
        self.threads = max(1, threads if threads is not None else settings.SEARCH_THREADS)
        self.split_cells = split_cells if split_cells is not None else settings.SEARCH_SPLIT_CELLS
        self.witness_cap = witness_cap if witness_cap is not None else settings.WITNESS_CAP
        self.progress_interval = (
            progress_interval if progress_interval is not None else settings.PROGRESS_INTERVAL
        )

    def _check_budget(self, space_size: int) -> None:
        if space_size > self.budget:
            logger.warning(f"Refusing search over {space_size} colorings (budget {self.budget})")
            raise BudgetExceededError(space_size, self.budget)

    def exhaustive(
        self,
        n: int,
        r: int,
        objective: Objective,
        constraint: Optional[Sequence[int]] = None,
        incremental: bool = True,
    ) -> ExtremumReport:
        """
        Exact optimum over all r-colorings of [1, n], or over those with the given
        per-color counts; consecutive colorings differ in one cell (two when constrained)
        """
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        if r not in (2, 3):
            raise ValueError(f"r must be 2 or 3, got {r}")
        objective.check_colors(r)
        start = time.perf_counter()

        if constraint is not None:
            result, space_size = self._constrained(n, r, objective, list(constraint))
            symmetric = False
        else:
            symmetric = r == 2 and objective.klass == SolutionClass.MONO
            # color-swap invariance lets cell 1 stay red
            free = tuple(range(1, n)) if symmetric else tuple(range(n))
            space_size = r ** len(free)
            self._check_budget(space_size)
            result = self._unconstrained(n, r, objective, free, incremental)

        wall = time.perf_counter() - start
        logger.info(
            f"Exhaustive {objective.text} for {objective.equation.text}, n={n}, r={r}: "
            f"best {result.best} over {result.explored} colorings in {wall:.2f}s"
        )
        return ExtremumReport(
            mode=SearchMode.EXHAUSTIVE,
            equation=objective.equation.text,
            objective=objective.text,
            n=n,
            r=r,
            best_value=result.best,
            witnesses=[Coloring(n=n, r=r, cells=w) for w in result.witnesses],
            multiplicity=result.multiplicity,
            explored=result.explored,
            space_size=space_size,
            symmetry_reduced=symmetric,
            constraint=list(constraint) if constraint is not None else None,
            wall_seconds=wall,
        )

    def _unconstrained(
        self,
        n: int,
        r: int,
        objective: Objective,
        free: Tuple[int, ...],
        incremental: bool,
    ) -> _PartitionResult:
        base = tuple([int(Color.RED)] * n)
        depth = min(self.split_cells, len(free))
        if self.threads == 1 or depth == 0:
            task = self._task(objective, r, base, free, incremental, "search")
            return _search_partition(task)

        inner, split = free[: len(free) - depth], free[len(free) - depth :]
        tasks = []
        for prefix in itertools.product(range(r), repeat=depth):
            cells = list(base)
            for index, color in zip(split, prefix):
                cells[index] = color
            label = "partition " + "".join(Color(c).letter for c in prefix)
            tasks.append(self._task(objective, r, tuple(cells), inner, incremental, label))

        logger.info(f"Splitting search into {len(tasks)} partitions over {self.threads} workers")
        with Pool(processes=self.threads) as pool:
            parts = pool.map(_search_partition, tasks)
        return _merge(objective.sign, self.witness_cap, parts)

    def _task(
        self,
        objective: Objective,
        r: int,
        base: Cells,
        free: Tuple[int, ...],
        incremental: bool,
        label: str,
    ) -> _PartitionTask:
        return _PartitionTask(
            eq=objective.equation,
            klass=objective.klass,
            sign=objective.sign,
            r=r,
            base=base,
            free=free,
            cap=self.witness_cap,
            incremental=incremental,
            progress_interval=self.progress_interval,
            label=label,
        )

    def _constrained(
        self, n: int, r: int, objective: Objective, constraint: List[int]
    ) -> Tuple[_PartitionResult, int]:
        if len(constraint) != r or any(k < 0 for k in constraint) or sum(constraint) != n:
            raise ValueError(
                f"Infeasible constraint {constraint}: need {r} nonnegative counts summing to {n}"
            )
        space_size = math.factorial(n)
        for k in constraint:
            space_size //= math.factorial(k)
        self._check_budget(space_size)

        eq = objective.equation
        counter = make_counter(objective.klass, eq.arity)
        incidence = EquationService.incidence(eq, n)
        rows = _all_rows(eq, n)
        tracker = _Tracker(objective.sign, self.witness_cap, self.progress_interval, "constrained")

        green = constraint[Color.GREEN] if r == 3 else 0
        for green_mask in revolving_door(n, green):
            cells = [int(Color.GREEN) if green_mask >> i & 1 else int(Color.RED) for i in range(n)]
            open_cells = [i for i in range(n) if not green_mask >> i & 1]
            value: Optional[int] = None
            previous = 0
            for blue_mask in revolving_door(len(open_cells), constraint[Color.BLUE]):
                if value is None:
                    for bit, i in enumerate(open_cells):
                        if blue_mask >> bit & 1:
                            cells[i] = int(Color.BLUE)
                    value = counter(cells, rows)
                else:
                    changed = previous ^ blue_mask
                    for bit, i in enumerate(open_cells):
                        if changed >> bit & 1:
                            target = Color.BLUE if blue_mask >> bit & 1 else Color.RED
                            value += apply_delta(cells, incidence[i], i, int(target), counter)
                previous = blue_mask
                tracker.visit(value, cells)

        result = _PartitionResult(
            tracker.best, tracker.witnesses, tracker.multiplicity, tracker.explored
        )
        return result, space_size

    def local_search(
        self,
        n: int,
        r: int,
        objective: Objective,
        restarts: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> ExtremumReport:
        """
        Steepest single-flip descent (ascent for max objectives) from the all-red
        coloring and from `restarts` seeded random colorings; no optimality claim
        """
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")
        objective.check_colors(r)
        restarts = settings.LOCAL_SEARCH_RESTARTS if restarts is None else restarts
        seed = settings.DEFAULT_SEED if seed is None else seed
        start = time.perf_counter()

        eq = objective.equation
        counter = make_counter(objective.klass, eq.arity)
        incidence = EquationService.incidence(eq, n)
        rows = _all_rows(eq, n)
        rng = np.random.default_rng(seed)
        starts = [[int(Color.RED)] * n] + [
            [int(c) for c in rng.integers(0, r, size=n)] for _ in range(restarts)
        ]

        tracker = _Tracker(objective.sign, self.witness_cap)
        explored = 0
        for cells in starts:
            value = counter(cells, rows)
            explored += 1
            while True:
                move: Optional[Tuple[int, int]] = None
                gain = 0
                for i in range(n):
                    current = cells[i]
                    for color in range(r):
                        if color == current:
                            continue
                        delta = apply_delta(cells, incidence[i], i, color, counter)
                        cells[i] = current
                        explored += 1
                        # strict comparison keeps the first move among equals
                        if objective.sign * delta < objective.sign * gain:
                            move, gain = (i, color), delta
                if move is None:
                    break
                cells[move[0]] = move[1]
                value += gain
            tracker.visit(value, cells)

        wall = time.perf_counter() - start
        logger.info(
            f"Local search {objective.text} for {eq.text}, n={n}: best {tracker.best} "
            f"after {len(starts)} starts"
        )
        return ExtremumReport(
            mode=SearchMode.LOCAL,
            equation=eq.text,
            objective=objective.text,
            n=n,
            r=r,
            best_value=tracker.best,
            witnesses=[Coloring(n=n, r=r, cells=w) for w in tracker.witnesses],
            explored=explored,
            heuristic=True,
            wall_seconds=wall,
        )

    def block_sweep(
        self,
        n: int,
        objective: Objective,
        pattern: Sequence[Color],
        granularity: int = 1,
    ) -> ExtremumReport:
        """Exact objective at every placement of the pattern's block boundaries on the grid"""
        if not 1 <= len(pattern) <= 4:
            raise ValueError(f"Block patterns hold 1 to 4 colors, got {len(pattern)}")
        if granularity < 1:
            raise ValueError(f"Granularity must be positive, got {granularity}")
        if n < 1:
            raise ValueError(f"n must be positive, got {n}")

        pattern = [Color(c) for c in pattern]
        rainbow = objective.klass == SolutionClass.RAINBOW
        r = 3 if rainbow or Color.GREEN in pattern else 2
        objective.check_colors(r)
        eq = objective.equation
        packed = not rainbow and eq.arity == 3
        start = time.perf_counter()

        grid = sorted(set(range(0, n + 1, granularity)) | {n})
        best: Optional[int] = None
        witnesses: List[Cells] = []
        boundaries: List[Tuple[int, ...]] = []
        explored = 0
        for bounds in itertools.combinations_with_replacement(grid, len(pattern) - 1):
            edges = (0, *bounds, n)
            cells: List[int] = []
            for k, color in enumerate(pattern):
                cells.extend([int(color)] * (edges[k + 1] - edges[k]))
            coloring = Coloring(n=n, r=r, cells=tuple(cells))
            if packed:
                value = CountingService.packed_mono_count(coloring, eq)
            else:
                value = CountingService.class_value(coloring, eq, objective.klass)
            explored += 1

            if objective.better(value, best):
                best, witnesses, boundaries = value, [coloring.cells], [bounds]
            elif value == best and len(boundaries) < self.witness_cap:
                boundaries.append(bounds)
                if coloring.cells not in witnesses:
                    witnesses.append(coloring.cells)

        wall = time.perf_counter() - start
        logger.info(
            f"Block sweep {''.join(c.letter for c in pattern)} for {eq.text}, n={n}, "
            f"g={granularity}: best {best} at {boundaries[0]}"
        )
        return ExtremumReport(
            mode=SearchMode.SWEEP,
            equation=eq.text,
            objective=objective.text,
            n=n,
            r=r,
            best_value=best,
            witnesses=[Coloring(n=n, r=r, cells=w) for w in sorted(witnesses)],
            explored=explored,
            space_size=explored,
            boundaries=boundaries,
            wall_seconds=wall,
        )


def run_search(request: SearchRequest, threads: Optional[int] = None) -> ExtremumReport:
    """Dispatch a search request to the matching mode"""
    eq = Equation.parse(request.equation)
    objective = Objective.parse(request.objective, eq)
    service = get_search_service(budget=request.budget, threads=threads)
    if request.mode == SearchMode.EXHAUSTIVE:
        return service.exhaustive(request.n, request.r, objective, constraint=request.constraint)
    if request.mode == SearchMode.LOCAL:
        return service.local_search(
            request.n, request.r, objective, restarts=request.restarts, seed=request.seed
        )
    if not request.pattern:
        raise ValueError("Sweep mode needs a block pattern such as 'RBR'")
    return service.block_sweep(
        request.n, objective, parse_pattern(request.pattern), request.granularity
    )


def get_search_service(**overrides) -> SearchService:
    """Search service configured from settings, with optional per-call overrides"""
    return SearchService(**overrides)
