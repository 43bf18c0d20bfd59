import random
from fractions import Fraction as F

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from stackelberg_l1.core_geometry import Arena, Point, cell_area, grid_site, grid_sites
from stackelberg_l1.errors import DomainError, InconsistentCase, OnBoundary, OrientationError
from stackelberg_l1.exact_opt import Surd
from stackelberg_l1.grid_solver import (
    PairTheftCase,
    area_grid_closed_form,
    best_point_grid,
    black_grid_arrangement,
    grid_table,
    grid_table_row_for,
    theft_pair_area,
)
from stackelberg_l1.partition import section_of_grid
from stackelberg_l1.row_solver import score_arrangement


def _exact(arena, a, b, anchor, local):
    whites = grid_sites(arena, a, b)
    return cell_area(arena, whites + [grid_site(arena, a, b, *anchor) + local], len(whites))


def test_pair_theft_zero():
    assert theft_pair_area(Arena(4, 2), 2, 2, PairTheftCase(0, "Zero"), Point(F(1, 2), 0)) == 1


def test_pair_theft_through():
    arena = Arena(8, 8)
    assert theft_pair_area(arena, 2, 4, PairTheftCase(1, "Through"), Point(F(3, 2), 1)) == 3


def test_pair_theft_rejects_unreachable_regime():
    with pytest.raises(InconsistentCase):
        theft_pair_area(Arena(8, 8), 2, 4, PairTheftCase(1, "Through"), Point(F(1, 4), F(1, 4)))
    with pytest.raises(InconsistentCase):
        PairTheftCase(0, "Through")


def test_section_one_optimum_value():
    arena = Arena(6, 4)
    # pq/2ab + q^2/8b^2 is the supremum on the column axis, approached from inside Section I.
    z = Point(F(1, 1000), F(999, 1000))
    v = area_grid_closed_form(arena, 3, 2, (2, 1), z)
    assert v == _exact(arena, 3, 2, (2, 1), z)
    assert F(5, 2) - F(1, 100) < v < F(5, 2)


def test_odd_section_near_column_edge():
    arena = Arena(8, 8)
    z = Point(F(199, 100), F(99, 100))
    assert area_grid_closed_form(arena, 2, 4, (1, 2), z) == F(64999, 10000) == _exact(arena, 2, 4, (1, 2), z)


def test_boundary_points_raise():
    with pytest.raises(OnBoundary):
        area_grid_closed_form(Arena(4, 2), 2, 2, (1, 1), Point(1, F(1, 6)))


@given(st.integers(2, 5), st.integers(2, 5), st.integers(-999, 999), st.integers(-999, 999),
       st.integers(0, 24), st.integers(1, 8))
def test_closed_form_equals_polygon(a, b, fx, fy, which, stretch):
    q = F(b)
    p = 2 * a * F(stretch, 4) if F(stretch, 4) >= F(1, 2) else F(a)
    arena = Arena(p, q)
    col, row = which % a + 1, (which // a) % b + 1
    z = Point(p / (2 * a) * F(fx, 1000), q / (2 * b) * F(fy, 1000))
    try:
        section_of_grid(arena, a, b, (col, row), z)
    except OnBoundary:
        assume(False)
    assert area_grid_closed_form(arena, a, b, (col, row), z) == _exact(arena, a, b, (col, row), z)


def test_best_point_golden_thirteen_halves():
    rec = best_point_grid(Arena(8, 8), 2, 4)
    assert rec.area == F(13, 2)
    assert rec.location == Point(4, 4)


def test_best_point_two_by_two_is_three_halves():
    rec = best_point_grid(Arena(4, 2), 2, 2)
    assert rec.area == F(3, 2) > F(4, 3)
    assert rec.section == "Final"


def test_missing_interior_section_b_optimum():
    rec = best_point_grid(Arena(12, 5), 3, 5)
    assert rec.area == F(61, 12) and rec.anchor == (2, 3) and rec.local == Point(2, F(1, 3))


def test_odd_constant_erratum_grid():
    arena = Arena(12, 8)
    z = Point(F(1999, 1000), F(499, 1000))
    assert float(area_grid_closed_form(arena, 3, 8, (2, 4), z)) == pytest.approx(F(41, 8), abs=1e-5)
    assert _exact(arena, 3, 8, (2, 4), Point(2, F(1, 2))) == F(41, 8)


def test_rotation():
    with pytest.raises(OrientationError):
        best_point_grid(Arena(2, 4), 2, 2)
    rec = best_point_grid(Arena(2, 4), 2, 2, rotate=True)
    assert rec.rotated and rec.area == F(3, 2)
    assert rec.location == Point(1, 2)


def test_small_grid_rejected():
    with pytest.raises(DomainError):
        best_point_grid(Arena(4, 2), 1, 2)
    with pytest.raises(DomainError):
        black_grid_arrangement(Arena(4, 2), 1, 2)


def test_sandwich_two_by_two():
    arena = Arena(4, 2)
    blacks = black_grid_arrangement(arena, 2, 2)
    assert set(blacks) == {Point(F(1, 2), 1), Point(F(3, 2), 1), Point(F(5, 2), 1), Point(F(7, 2), 1)}
    assert blacks.heuristic
    assert score_arrangement(arena, grid_sites(arena, 2, 2), blacks).black_total == 5


def test_sandwich_odd_b_has_approach_points():
    blacks = black_grid_arrangement(Arena(6, 3), 2, 3)
    assert len(blacks.points) == 6 and blacks.approach_limit


@pytest.mark.parametrize("a,b", [(2, 2), (2, 3), (3, 4), (4, 5)])
def test_table_tiles(a, b):
    rows = grid_table(a, b)
    assert rows[0].lo == Surd(F(1, 2)) and rows[-1].hi is None
    for r1, r2 in zip(rows, rows[1:]):
        assert r1.hi == r2.lo


def test_table_matches_full_search_over_anchors():
    rng = random.Random(3)
    for _ in range(25):
        a, b = rng.randint(2, 5), rng.randint(2, 5)
        s = F(1)
        t = F(rng.randint(4, 40), 8)
        arena = Arena(2 * a * t, b * s)
        rec = best_point_grid(arena, a, b)
        assert grid_table_row_for(a, b, t).area(arena.p, arena.q) == rec.area
