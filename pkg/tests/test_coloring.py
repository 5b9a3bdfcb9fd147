"""
Coloring service tests
"""

from fractions import Fraction

import pytest
import sympy
from pydantic import ValidationError

from app.schemas.coloring import BlockSpec, Color, Coloring
from app.services.coloring_service import (
    flip,
    format_runlength,
    from_blocks,
    mu_stats,
    pair_stats,
    parse_runlength,
    random_coloring,
    swap_colors,
)
from tests.conftest import make_coloring

R, B, G = Color.RED, Color.BLUE, Color.GREEN


def test_from_blocks_scaled_schur_coloring():
    """Test 4:6:1 blocks at n = 11"""
    coloring = from_blocks(11, BlockSpec.of((R, 4), (B, 6), (R, 1)))
    assert coloring.runs == "R4 B6 R1"
    assert coloring.cells[:4] == (R,) * 4
    assert coloring.color_of(11) == R


def test_from_blocks_single_block():
    """Test a single block fills the interval"""
    assert from_blocks(5, BlockSpec.of((R, 1))).runs == "R5"


def test_from_blocks_rational_weights():
    """Test cumulative-floor boundaries for weights 1, 7/3, 1/3 at n = 10"""
    spec = BlockSpec.of((R, 1), (B, Fraction(7, 3)), (R, Fraction(1, 3)))
    coloring = from_blocks(10, spec)
    assert coloring.n == 10
    assert coloring.runs == "R2 B7 R1"


def test_from_blocks_algebraic_weights():
    """Test sqrt(3) weights are rounded exactly and tile [1, n]"""
    root = 10 - sympy.sqrt(3)
    spec = BlockSpec.of((R, 3 * root), (B, (6 + sympy.sqrt(3)) * root), (R, root))
    for n in (97, 194, 50):
        coloring = from_blocks(n, spec)
        assert coloring.n == n
        lengths = [int(token[1:]) for token in coloring.runs.split()]
        exact = [float(3 * root / 97 * n), float((6 + sympy.sqrt(3)) * root / 97 * n)]
        assert abs(lengths[0] - exact[0]) < 1
        assert abs(lengths[1] - exact[1]) < 2


def test_from_blocks_rejects_zero_total():
    """Test all-zero weights are rejected"""
    with pytest.raises(ValidationError):
        BlockSpec.of((R, 0), (B, 0))
    with pytest.raises(ValidationError):
        BlockSpec(blocks=[])


def test_block_lengths_within_one_cell():
    """Test each realized block differs from its exact share by less than one cell"""
    spec = BlockSpec.of((R, 4), (B, 6), (R, 1))
    for n in range(1, 60):
        coloring = from_blocks(n, spec)
        red_head = next((i for i, c in enumerate(coloring.cells) if c != R), n)
        assert abs(red_head - 4 * n / 11) < 1


def test_parse_runlength():
    """Test run-length parsing"""
    coloring = parse_runlength("R4 B6 R1")
    assert coloring.n == 11
    assert coloring.r == 2
    assert "".join(Color(c).letter for c in coloring.cells) == "RRRRBBBBBBR"


def test_format_runlength_merges_runs():
    """Test runs are re-canonicalized"""
    assert parse_runlength("R2 R3").cells == parse_runlength("R5").cells
    assert format_runlength(parse_runlength("R2 R3")) == "R5"
    assert format_runlength(make_coloring([B, B, B])) == "B3"


def test_parse_runlength_green_needs_three_colors():
    """Test green cells select r = 3"""
    assert parse_runlength("R1 G2").r == 3
    with pytest.raises(ValueError):
        parse_runlength("R1 G2", r=2)


@pytest.mark.parametrize("text", ["", "   ", "X3", "R0", "R", "3R", "R2 B-1"])
def test_parse_runlength_errors(text):
    """Test malformed run-length text is rejected"""
    with pytest.raises(ValueError):
        parse_runlength(text)


def test_round_trip_from_blocks(rng):
    """Test blocks -> text -> coloring keeps every cell"""
    for n in (7, 22, 110):
        coloring = from_blocks(n, BlockSpec.of((R, 3), (B, 7), (R, 1)))
        assert parse_runlength(format_runlength(coloring)).cells == coloring.cells
    for _ in range(20):
        coloring = random_coloring(30, 3, rng)
        assert parse_runlength(format_runlength(coloring), r=3) == coloring


def test_mu_stats_whole_interval():
    """Test color counts for a = 1"""
    stats = mu_stats(parse_runlength("R4 B6 R1"), 1)
    assert stats.mu == [5, 6]
    assert stats.mu_lo == [5, 6]
    assert stats.mu_hi == [0, 0]


def test_mu_stats_split():
    """Test the split at n // a"""
    stats = mu_stats(parse_runlength("R3 B9"), 2)
    assert stats.split == 6
    assert stats.mu_lo == [3, 3]
    assert stats.mu_hi == [0, 6]


def test_mu_stats_matches_tally(rng):
    """Test mu statistics against an elementwise tally"""
    coloring = parse_runlength("R6 B14 R2")
    stats = mu_stats(coloring, 2)
    assert stats.mu_lo == [sum(coloring.color_of(i) == c for i in range(1, 12)) for c in (R, B)]
    for _ in range(20):
        coloring = random_coloring(37, 3, rng)
        for a in (1, 2, 3, 5):
            stats = mu_stats(coloring, a)
            assert sum(stats.mu) == 37
            assert sum(stats.mu_lo) == 37 // a
            assert [lo + hi for lo, hi in zip(stats.mu_lo, stats.mu_hi)] == stats.mu


def test_pair_stats_monochromatic():
    """Test an all-red coloring has no bichromatic pairs"""
    stats = pair_stats(parse_runlength("R10"), 10)
    assert stats.count(R, R) == 5
    assert stats.gamma_count == 0


def test_pair_stats_straddling_pairs():
    """Test every pair of R5 B5 straddles the midpoint"""
    stats = pair_stats(parse_runlength("R5 B5"), 10)
    assert stats.count(R, B) == 5
    assert stats.count(B, R) == 0
    assert stats.gamma_count == 5
    assert stats.gamma == 0.5


def test_pair_stats_sub_interval():
    """Test pairs of the a = 2 sub-interval against direct enumeration"""
    coloring = parse_runlength("R6 B14 R2")
    stats = pair_stats(coloring, 11)
    expected = [[0, 0], [0, 0]]
    for s in range(1, 6):
        expected[coloring.color_of(s)][coloring.color_of(12 - s)] += 1
    assert stats.mu_cc == expected
    assert stats.pairs == 5


def test_pair_stats_rejects_long_interval():
    """Test L > n is rejected"""
    with pytest.raises(ValueError):
        pair_stats(parse_runlength("R5"), 6)


def test_flip():
    """Test a flip changes exactly one cell"""
    coloring = parse_runlength("R3")
    flipped = flip(coloring, 2, B)
    assert flipped.runs == "R1 B1 R1"
    assert flip(flipped, 2, R) == coloring
    assert (flipped.n, flipped.r) == (3, 2)


def test_flip_errors():
    """Test out-of-range flips are rejected"""
    coloring = parse_runlength("R3")
    with pytest.raises(ValueError):
        flip(coloring, 0, B)
    with pytest.raises(ValueError):
        flip(coloring, 4, B)
    with pytest.raises(ValueError):
        flip(coloring, 1, G)


def test_swap_colors():
    """Test red and blue are exchanged and green stays"""
    assert swap_colors(parse_runlength("R2 B1 G1")).runs == "B2 R1 G1"
    coloring = parse_runlength("R4 B6 R1")
    assert swap_colors(swap_colors(coloring)) == coloring


def test_random_coloring_is_seeded():
    """Test seeded generators reproduce colorings"""
    import numpy as np

    first = random_coloring(50, 3, np.random.default_rng(7))
    second = random_coloring(50, 3, np.random.default_rng(7))
    assert first == second
    assert set(first.cells) <= {0, 1, 2}


def test_coloring_json_shape():
    """Test colorings serialize as run-length JSON"""
    coloring = parse_runlength("R4 B6 R1")
    assert coloring.model_dump() == {"n": 11, "r": 2, "runs": "R4 B6 R1"}
    assert Coloring.model_validate({"n": 11, "r": 2, "runs": "R4 B6 R1"}) == coloring


def test_coloring_validation():
    """Test cell count and color range are enforced"""
    with pytest.raises(ValidationError):
        Coloring(n=3, r=2, cells=(0, 1))
    with pytest.raises(ValidationError):
        Coloring(n=2, r=2, cells=(0, 2))
    with pytest.raises(ValidationError):
        Coloring.model_validate({"n": 4, "r": 2, "runs": "R3"})
