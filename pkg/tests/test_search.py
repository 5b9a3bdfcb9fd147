"""
Search service tests
"""

import itertools
import math

import pytest

from app.core.errors import BudgetExceededError
from app.schemas.coloring import Color
from app.schemas.counting import SolutionClass
from app.schemas.equation import Equation
from app.schemas.search import Direction, Objective, SearchMode, SearchRequest
from app.services.coloring_service import parse_runlength
from app.services.counting_service import count_classes
from app.services.search_service import (
    SearchService,
    get_search_service,
    gray_changes,
    revolving_door,
    run_search,
)
from app.services.theory_service import canonical_coloring
from tests.conftest import all_colorings, make_coloring, naive_counts

R, B, G = Color.RED, Color.BLUE, Color.GREEN
SCHUR = Equation.schur()
MIN_MONO = Objective(equation=SCHUR)
MAX_RAINBOW = Objective(equation=SCHUR, klass=SolutionClass.RAINBOW, direction=Direction.MAX)


@pytest.fixture
def search():
    return SearchService(budget=2**20, threads=1)


def _value(coloring, objective):
    return count_classes(coloring, objective.equation).of(objective.klass)


@pytest.mark.parametrize("length, radix", [(0, 2), (1, 3), (4, 2), (3, 3), (5, 3)])
def test_gray_code_visits_every_word_once(length, radix):
    """Test each step changes one digit by one and every word appears"""
    digits = [0] * length
    seen = {tuple(digits)}
    for j, value in gray_changes(length, radix):
        assert abs(value - digits[j]) == 1
        digits[j] = value
        seen.add(tuple(digits))
    assert len(seen) == radix**length
    assert len(list(gray_changes(length, radix))) == radix**length - 1


@pytest.mark.parametrize("n, k", [(1, 0), (1, 1), (5, 2), (6, 3), (8, 5), (7, 7)])
def test_revolving_door_visits_every_subset(n, k):
    """Test each k-subset appears once and neighbours differ by one swap"""
    masks = list(revolving_door(n, k))
    assert len(masks) == len(set(masks)) == math.comb(n, k)
    assert all(mask.bit_count() == k for mask in masks)
    for before, after in zip(masks, masks[1:]):
        assert (before ^ after).bit_count() == 2


def test_revolving_door_backwards_reverses():
    """Test the backwards order is the forward order reversed"""
    assert list(revolving_door(7, 3, backwards=True)) == list(revolving_door(7, 3))[::-1]
    assert list(revolving_door(3, 4)) == []


def test_exhaustive_two_cells(search):
    """Test R B avoids 1 + 1 = 2"""
    report = search.exhaustive(2, 2, MIN_MONO)
    assert report.best_value == 0
    assert [w.runs for w in report.witnesses] == ["R1 B1"]
    assert report.symmetry_reduced
    assert report.space_size == 2


def test_exhaustive_schur_number_two(search):
    """Test [1, 4] has a mono-free 2-coloring and [1, 5] does not"""
    assert search.exhaustive(4, 2, MIN_MONO).best_value == 0
    assert search.exhaustive(5, 2, MIN_MONO).best_value > 0


@pytest.mark.parametrize("eq", [SCHUR, Equation.schur(2), Equation.two_coef(2, 3)], ids=str)
def test_exhaustive_matches_brute_force(search, eq):
    """Test the optimum and its multiplicity against every coloring of [1, 8]"""
    values = [naive_counts(coloring, eq)[0] for coloring in all_colorings(8)]
    best = min(values)
    report = search.exhaustive(8, 2, Objective(equation=eq))
    assert report.best_value == best
    # cell 1 is pinned red; the swap pairs each optimum with one of the other half
    assert 2 * report.multiplicity == values.count(best)
    for witness in report.witnesses:
        assert witness.cells[0] == R
        assert _value(witness, Objective(equation=eq)) == best


def test_exhaustive_max_mono(search):
    """Test the maximum of the monochromatic count is the all-one-color total"""
    report = search.exhaustive(7, 2, Objective(equation=SCHUR, direction=Direction.MAX))
    assert report.best_value == count_classes(parse_runlength("R7"), SCHUR).total
    assert [w.runs for w in report.witnesses] == ["R7"]


@pytest.mark.parametrize("r", [2, 3])
def test_incremental_matches_recount(search, r):
    """Test delta-updated enumeration agrees with full recounts"""
    n = 9 if r == 2 else 6
    for objective in (MIN_MONO, Objective(equation=Equation.schur(2), direction=Direction.MAX)):
        fast = search.exhaustive(n, r, objective, incremental=True)
        slow = search.exhaustive(n, r, objective, incremental=False)
        assert fast.best_value == slow.best_value
        assert fast.multiplicity == slow.multiplicity
        assert fast.witnesses == slow.witnesses


def test_witnesses_are_lexicographically_smallest():
    """Test capped witnesses are the smallest optimal cell tuples"""
    full = SearchService(budget=2**20, threads=1, witness_cap=1000).exhaustive(9, 2, MIN_MONO)
    capped = SearchService(budget=2**20, threads=1, witness_cap=3).exhaustive(9, 2, MIN_MONO)
    assert capped.witnesses == full.witnesses[:3]
    assert capped.multiplicity == full.multiplicity
    cells = [w.cells for w in full.witnesses]
    assert cells == sorted(cells)


def test_constrained_optima_cover_unconstrained(search):
    """Test the best constrained optimum equals the unconstrained one"""
    n = 9
    unconstrained = search.exhaustive(n, 2, MIN_MONO)
    reports = [search.exhaustive(n, 2, MIN_MONO, constraint=[n - k, k]) for k in range(n + 1)]
    assert min(r.best_value for r in reports) == unconstrained.best_value
    winners = [r for r in reports if r.best_value == unconstrained.best_value]
    assert sum(r.multiplicity for r in winners) == 2 * unconstrained.multiplicity
    for report in reports:
        assert report.space_size == math.comb(n, report.constraint[1])
        assert report.explored == report.space_size
        assert not report.symmetry_reduced


def test_constrained_witnesses_keep_counts(search):
    """Test witnesses carry the requested color counts"""
    report = search.exhaustive(12, 2, MIN_MONO, constraint=[4, 8])
    for witness in report.witnesses:
        assert witness.counts() == [4, 8]
        assert _value(witness, MIN_MONO) == report.best_value


def test_constrained_three_colors(search):
    """Test a 3-color constraint against brute force"""
    constraint = [2, 2, 2]
    candidates = [c for c in all_colorings(6, 3) if c.counts() == constraint]
    expected = max(naive_counts(c, SCHUR)[1] for c in candidates)
    report = search.exhaustive(6, 3, MAX_RAINBOW, constraint=constraint)
    assert report.best_value == expected
    assert report.explored == len(candidates) == 90


@pytest.mark.parametrize("constraint", [[3, 3], [1, 2], [5, -1], [2, 2, 2]])
def test_infeasible_constraint(search, constraint):
    """Test counts that do not describe a 2-coloring of [1, 5] are rejected"""
    with pytest.raises(ValueError):
        search.exhaustive(5, 2, MIN_MONO, constraint=constraint)


def test_budget_is_enforced():
    """Test oversized spaces fail before any work"""
    with pytest.raises(BudgetExceededError) as error:
        SearchService(budget=100, threads=1).exhaustive(10, 2, MIN_MONO)
    assert error.value.space_size == 2**9
    with pytest.raises(BudgetExceededError):
        SearchService(budget=100, threads=1).exhaustive(10, 2, MIN_MONO, constraint=[5, 5])


def test_rainbow_needs_three_colors(search):
    """Test rainbow objectives are refused for 2-colorings"""
    with pytest.raises(ValueError):
        search.exhaustive(5, 2, MAX_RAINBOW)
    with pytest.raises(ValueError):
        search.local_search(5, 2, MAX_RAINBOW)


def test_rainbow_maximum_at_ten(search):
    """Test the exhaustive rainbow maximum at n = 10 equals the recipe count and n(n+1)/10"""
    report = search.exhaustive(10, 3, MAX_RAINBOW)
    recipe = canonical_coloring(SCHUR, 10, direction=Direction.MAX, klass=SolutionClass.RAINBOW)
    assert report.best_value == 11 == count_classes(recipe, SCHUR).rainbow
    assert recipe in report.witnesses
    assert not report.symmetry_reduced
    assert report.space_size == 3**10
    for witness in report.witnesses:
        assert count_classes(witness, SCHUR).rainbow == report.best_value


def test_parallel_search_matches_serial():
    """Test partitioned workers merge to the serial result"""
    serial = SearchService(budget=2**20, threads=1).exhaustive(11, 2, MIN_MONO)
    parallel = SearchService(budget=2**20, threads=2, split_cells=3).exhaustive(11, 2, MIN_MONO)
    assert parallel.best_value == serial.best_value
    assert parallel.multiplicity == serial.multiplicity
    assert parallel.witnesses == serial.witnesses
    assert parallel.explored == serial.explored


def test_local_search_is_seeded(search):
    """Test local search is reproducible and never beats the exact optimum"""
    first = search.local_search(14, 2, MIN_MONO, restarts=4, seed=3)
    second = search.local_search(14, 2, MIN_MONO, restarts=4, seed=3)
    assert first.best_value == second.best_value
    assert first.witnesses == second.witnesses
    assert first.heuristic
    assert first.multiplicity is None
    assert first.best_value >= search.exhaustive(14, 2, MIN_MONO).best_value
    for witness in first.witnesses:
        assert _value(witness, MIN_MONO) == first.best_value


def test_local_search_rainbow(search):
    """Test local ascent from all red finds rainbow solutions"""
    report = search.local_search(10, 3, MAX_RAINBOW, restarts=5, seed=1)
    assert report.best_value > 0
    assert report.mode == SearchMode.LOCAL


def test_sweep_single_block(search):
    """Test a one-block pattern evaluates the all-blue coloring"""
    report = search.block_sweep(30, MIN_MONO, [B])
    assert report.best_value == count_classes(parse_runlength("B30"), SCHUR).total
    assert report.explored == 1
    assert report.boundaries == [()]


def test_sweep_reaches_scaled_coloring(search):
    """Test the RBR sweep at n = 22 is at most the 4:6:1 coloring"""
    report = search.block_sweep(22, MIN_MONO, [R, B, R])
    canonical = count_classes(parse_runlength("R8 B12 R2"), SCHUR).mono
    assert report.best_value <= canonical
    assert report.explored == math.comb(23 + 1, 2)
    for witness in report.witnesses:
        assert _value(witness, MIN_MONO) == report.best_value


def test_sweep_matches_direct_evaluation(search):
    """Test the packed fast path against class counts at every boundary pair"""
    n = 15
    values = {}
    for i, j in itertools.combinations_with_replacement(range(n + 1), 2):
        coloring = make_coloring([R] * i + [B] * (j - i) + [R] * (n - j))
        values[(i, j)] = count_classes(coloring, SCHUR).mono
    report = search.block_sweep(n, MIN_MONO, [R, B, R])
    assert report.best_value == min(values.values())
    assert all(values[tuple(b)] == report.best_value for b in report.boundaries)


def test_sweep_granularity(search):
    """Test coarse grids keep n as a boundary"""
    report = search.block_sweep(10, MIN_MONO, [R, B], granularity=4)
    assert report.explored == 4
    coarse = search.block_sweep(22, MIN_MONO, [R, B, R], granularity=5)
    fine = search.block_sweep(22, MIN_MONO, [R, B, R])
    assert coarse.best_value >= fine.best_value


def test_sweep_rainbow_uses_three_colors(search):
    """Test rainbow sweeps run on 3-colorings"""
    report = search.block_sweep(9, MAX_RAINBOW, [R, B, G])
    assert report.r == 3
    assert report.best_value > 0


@pytest.mark.parametrize("pattern, granularity", [([R, B, R, B, R], 1), ([], 1), ([R, B], 0)])
def test_sweep_validation(search, pattern, granularity):
    """Test pattern length and granularity limits"""
    with pytest.raises(ValueError):
        search.block_sweep(10, MIN_MONO, pattern, granularity)


def test_run_search_dispatch():
    """Test requests are routed by mode"""
    exhaustive = run_search(SearchRequest(n=8), threads=1)
    assert exhaustive.mode == SearchMode.EXHAUSTIVE
    local = run_search(SearchRequest(n=8, mode=SearchMode.LOCAL, restarts=1, seed=5), threads=1)
    assert local.heuristic
    sweep = run_search(SearchRequest(n=8, mode=SearchMode.SWEEP, pattern="R,B"), threads=1)
    assert sweep.boundaries
    with pytest.raises(ValueError):
        run_search(SearchRequest(n=8, mode=SearchMode.SWEEP), threads=1)
    with pytest.raises(ValueError):
        run_search(SearchRequest(n=8, objective="best-mono"), threads=1)


def test_search_service_uses_settings(mocker):
    """Test defaults come from settings"""
    mocker.patch("app.services.search_service.settings.SEARCH_BUDGET", 77)
    mocker.patch("app.services.search_service.settings.WITNESS_CAP", 2)
    service = get_search_service()
    assert service.budget == 77
    assert service.witness_cap == 2
    assert get_search_service(budget=5).budget == 5
