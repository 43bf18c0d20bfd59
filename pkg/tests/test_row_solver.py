import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from stackelberg_l1.core_geometry import Arena, Point, cell_area, row_sites
from stackelberg_l1.errors import DomainError, OnBoundary, SectionNotPresent
from stackelberg_l1.exact_opt import Surd
from stackelberg_l1.partition import SectionKind, Touching, section_of_row
from stackelberg_l1.row_solver import (
    SectionSpec,
    approach_sequence,
    area_row_closed_form,
    best_point_row,
    black_row_arrangement,
    limit_black_score,
    row_table,
    sandwich_condition_holds,
    sandwich_prediction,
    score_arrangement,
    section_optimum_row,
    table_row_for,
)


def _orbit(arena, z):
    return {Point(x, y) for x in (z.x, arena.p - z.x) for y in (z.y, arena.q - z.y)}


def test_closed_form_examples():
    arena = Arena(6, 2)
    assert area_row_closed_form(arena, 3, 2, Point(F(1, 5), F(1, 10))) == F(199, 100)
    assert area_row_closed_form(arena, 3, 2, Point(F(1, 5), F(1, 2))) == F(721, 400)


@given(st.integers(1, 6), st.integers(1, 6), st.integers(1, 48), st.integers(-999, 999), st.integers(-999, 999),
       st.integers(0, 5))
def test_closed_form_equals_polygon(n, p, q4, fx, fy, ii):
    arena = Arena(p, F(q4, 4))
    i = ii % n + 1
    b1 = Point(arena.p / (2 * n) * F(fx, 1000), arena.q / 2 * F(fy, 1000))
    try:
        section_of_row(arena, n, i, b1)
    except OnBoundary:
        assume(False)
    whites = row_sites(arena, n)
    assert area_row_closed_form(arena, n, i, b1) == cell_area(arena, whites + [whites[i - 1] + b1], n)


def test_even_one_flat_regime():
    arena = Arena(6, 1)  # q <= p/n
    rec = section_optimum_row(arena, 3, 2, SectionSpec(SectionKind.EVEN, 1))
    assert rec.area == arena.p * arena.q / 6 and rec.approach_limit


def test_even_two_middle_optimum_when_untouching():
    p, q, n = F(6), F(51, 10), 6
    rec = section_optimum_row(Arena(p, q), n, 3, SectionSpec(SectionKind.EVEN, 2))
    assert rec.local == Point(0, q / 3 - 2 * p / (3 * n))
    assert rec.area == 2 * p * q / (3 * n) - p * p / (6 * n * n) + q * q / 12
    assert rec.branch == "middle"


def test_even_two_touching_end_is_lower():
    # With n=4 the centre quadrant's Section IV reaches the left edge.
    p, q, n = F(4), F(51, 10), 4
    rec = section_optimum_row(Arena(p, q), n, 2, SectionSpec(SectionKind.EVEN, 2))
    assert rec.area == F(8641, 1600)
    assert rec.area < 2 * p * q / (3 * n) - p * p / (6 * n * n) + q * q / 12


def test_odd_one_bottom_optimum_corrected_constant():
    p, q, n = F(6), F(5, 2), 6
    rec = section_optimum_row(Arena(p, q), n, 3, SectionSpec(SectionKind.ODD, 1))
    assert rec.local == Point(F(1, 2), F(1, 2))
    assert rec.area == p * q / n - 3 * p * p / (4 * n * n)
    # Exact cells just inside the section approach this value from below.
    whites = row_sites(Arena(p, q), n)
    near = cell_area(Arena(p, q), whites + [whites[2] + Point(F(1, 2) - F(1, 1000), F(1, 2) + F(2, 1000))], n)
    assert rec.area - F(1, 100) < near < rec.area


def test_missing_section_raises():
    with pytest.raises(SectionNotPresent):
        section_optimum_row(Arena(6, 1), 3, 2, SectionSpec(SectionKind.ODD, 2))


@pytest.mark.parametrize("p,q,n,area,loc", [
    (2, 2, 2, F(5, 4), Point(1, F(1, 2))),
    (3, 3, 3, F(9, 4), Point(F(3, 2), 2)),
    (4, 8, 4, F(23, 2), None),
])
def test_best_point_goldens(p, q, n, area, loc):
    rec = best_point_row(Arena(p, q), n)
    assert rec.area == area
    if loc is not None:
        assert loc in _orbit(Arena(p, q), rec.location) or rec.tie


def test_best_point_n3_ties_between_sections():
    rec = best_point_row(Arena(3, 3), 3)
    assert rec.section in ("Odd{1}", "Final")
    assert rec.table_row is not None


def test_best_point_rejects_empty_row():
    with pytest.raises(DomainError):
        best_point_row(Arena(1, 1), 0)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_table_tiles_and_matches_solver(n):
    rows = row_table(n)
    assert rows[0].lo == Surd(F(0)) and rows[-1].hi is None
    for a, b in zip(rows, rows[1:]):
        assert a.hi == b.lo
    rng = random.Random(n)
    for _ in range(6):
        t = F(rng.randint(1, 80), 8)
        p = F(n)
        rec = best_point_row(Arena(p, t), n)
        assert table_row_for(n, t).area(p, t) == rec.area


def test_reference_even_rows_where_no_odd_section_interferes():
    n, p = 4, F(4)
    q = F(7, 2)  # Section IV bottom: 3pq/2n - 9p^2/4n^2
    assert best_point_row(Arena(p, q), n).area == 3 * p * q / (2 * n) - 9 * p * p / (4 * n * n)
    q = F(8)  # Section n+1
    assert best_point_row(Arena(p, q), n).area == p * q / 2 - F(3 * (n - 1) * n) * p * p / (8 * n * n)


def test_sandwich_points_and_score():
    arena = Arena(2, 3)
    blacks = black_row_arrangement(arena, 2)
    assert set(blacks) == {Point(1, 2), Point(1, 1)}
    rep = score_arrangement(arena, row_sites(arena, 2), blacks)
    assert rep.black_total == F(9, 2) and rep.white_total == F(3, 2) and rep.degenerate


def test_sandwich_odd_n_has_approach_point():
    arena = Arena(6, 2)
    blacks = black_row_arrangement(arena, 3)
    assert blacks.points[:2] == (Point(2, 2), Point(2, 0))
    assert blacks.approach_limit and blacks.points[2].y == 1 and 4 < blacks.points[2].x < 5
    with pytest.raises(DomainError):
        black_row_arrangement(arena, 3, delta=5)
    with pytest.raises(DomainError):
        black_row_arrangement(arena, 1)


def test_sandwich_pairs_at_pair_midpoints():
    blacks = black_row_arrangement(Arena(4, 8), 4)
    assert set(blacks) == {Point(1, F(9, 2)), Point(1, F(7, 2)), Point(3, F(9, 2)), Point(3, F(7, 2))}


def test_score_without_blacks():
    arena = Arena(5, 4)
    rep = score_arrangement(arena, row_sites(arena, 3), [])
    assert rep.white_total == 20 and rep.black_total == 0


def test_score_random_configuration_sums_to_arena():
    rng = random.Random(9)
    arena = Arena(5, 4)
    pts = list({Point(F(rng.randint(1, 49), 10), F(rng.randint(1, 39), 10)) for _ in range(6)})
    rep = score_arrangement(arena, pts[:3], pts[3:])
    assert rep.white_total + rep.black_total == 20


@pytest.mark.parametrize("n,p,q", [(2, 2, 3), (4, 4, 8), (6, 6, 10), (4, 4, 3)])
def test_sandwich_formula(n, p, q):
    arena = Arena(p, q)
    assert sandwich_condition_holds(arena, n)
    rep = score_arrangement(arena, row_sites(arena, n), black_row_arrangement(arena, n))
    assert rep.black_total == sandwich_prediction(arena, n)


def test_sandwich_condition_is_exact():
    assert not sandwich_condition_holds(Arena(1, F(22679, 10000)), 1)
    assert sandwich_condition_holds(Arena(1, F(22680, 10000)), 1)


def test_limit_score_odd():
    assert limit_black_score(Arena(5, 4), 5) == 15


def test_approach_sequence_constant():
    seq = approach_sequence(Arena(6, 2), 3)
    areas = [a for _, _, a, _ in seq]
    assert areas == sorted(areas)
    for k, _, _, short in seq:
        assert short == F(1, 4) * F(1, 10 ** (2 * k))
