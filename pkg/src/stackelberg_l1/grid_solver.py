"""Closed-form areas and best points when White plays an ``a x b`` grid.

Local frame: the anchor White point is the origin, ``x`` runs across the
columns and ``y`` along them.  Write ``h = p/2a`` for the half cell width
and ``s = q/b`` for the row pitch; the solver requires ``2h >= s``.

Above Section I Black only steals from pairs of White cells side by side
(the anchor's column and the column to its right), one pair per row
offset ``i``.  Each pair contributes one of three quadratics:

* ``Zero``: the anchor's own row;
* ``Through``: a row that Black's cell crosses completely;
* ``Terminal``: the last row reached, crossed only partly.

When the right-hand column is missing (anchor in the last column) the
problem collapses to a row of ``b`` points laid along the column, so the
row solver is reused with the axes exchanged.  Section I below the top row
is handled by three explicit quadratics, and in the top row by a
horizontal row problem in a strip one row high.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core_geometry import Arena, Point, as_exact, cell_area, grid_site, grid_sites
from .errors import DomainError, InconsistentCase, OrientationError, SectionNotPresent
from .exact_opt import (
    AreaQuadratic,
    Branch,
    HalfPlane,
    Poly2,
    Surd,
    maximize,
    parametric_envelope,
    section_branches,
    total,
)
from .partition import (
    QuadrantClass,
    SectionKind,
    SectionLabel,
    Touching,
    check_orientation,
    final_section_number,
    section_of_grid,
)
from .row_solver import (
    BlackArrangement,
    OptimumRecord,
    SectionSpec,
    row_section_constraints,
    row_section_quadratic,
    _check_tail,
    row_sections,
    section_name,
)

F = Fraction

__all__ = [
    "GridTableRow",
    "PairTheftCase",
    "area_grid_closed_form",
    "best_point_grid",
    "black_grid_arrangement",
    "grid_section_constraints",
    "grid_section_quadratic",
    "grid_table",
    "pair_cases",
    "section_optimum_grid",
    "theft_pair_area",
]

THROUGH, TERMINAL, ZERO = "Through", "Terminal", "Zero"


@dataclass(frozen=True)
class PairTheftCase:
    """Theft from the pair of White cells ``i`` rows away from the anchor."""

    i: int
    regime: str

    def __post_init__(self) -> None:
        if self.regime not in (THROUGH, TERMINAL, ZERO):
            raise InconsistentCase(f"unknown regime {self.regime!r}")
        if (self.regime == ZERO) != (self.i == 0):
            raise InconsistentCase("the Zero regime is exactly the anchor's own row")


def pair_quadratic(p, q, a: int, b: int, case: PairTheftCase) -> AreaQuadratic:
    """Area taken from one pair of White cells as a quadratic in local ``(x, y)``."""
    h, s = as_exact(p) / (2 * a), as_exact(q) / b
    hs = h * s
    i = case.i
    if case.regime == ZERO:
        return AreaQuadratic(yy=F(-1), c=hs)
    if case.regime == THROUGH:
        if i > 0:
            return AreaQuadratic(y=s, c=hs - (4 * i - 1) * s * s / 4)
        return AreaQuadratic(y=-s, c=hs + (4 * i + 1) * s * s / 4)
    if i > 0:
        k = i - 1
        return AreaQuadratic(xx=F(-1, 4), yy=F(1, 4), x=h / 2, y=h / 2 - k * s / 2,
                             c=-k * hs / 2 + k * k * s * s / 4)
    k = i + 1
    return AreaQuadratic(xx=F(-1, 4), yy=F(1, 4), x=h / 2, y=-(h / 2 + k * s / 2),
                         c=k * hs / 2 + k * k * s * s / 4)


def _pair_regime_holds(case: PairTheftCase, x: Fraction, y: Fraction, s: Fraction) -> bool:
    """Closed membership test: does a point at canonical ``(x, y)`` see this
    pair in the stated regime?"""
    if y > x:
        return False  # Section I is not made of pairs
    up, down = (x + y) / s, (x - y) / s
    i = case.i
    if case.regime == ZERO:
        return True
    reach = up if i > 0 else down
    m = abs(i)
    if case.regime == THROUGH:
        return reach >= m
    return m - 1 <= reach <= m


def theft_pair_area(arena: Arena, a: int, b: int, case: PairTheftCase, b1: Point) -> Fraction:
    """Area Black at local ``b1`` takes from the pair of cells ``case.i`` rows away.

    ``b1`` must lie (weakly) in the canonical quadrant where the pair is
    reached in the stated regime.
    """
    check_orientation(arena, a, b)
    x, y = as_exact(b1.x), as_exact(b1.y)
    h, s = arena.p / (2 * a), arena.q / b
    if not (0 <= x <= h and 0 <= y <= s / 2):
        raise InconsistentCase("b1 must lie in the canonical quadrant")
    if not _pair_regime_holds(case, x, y, s):
        raise InconsistentCase(f"{case.regime} theft at offset {case.i} is impossible from ({x}, {y})")
    return pair_quadratic(arena.p, arena.q, a, b, case)(x, y)


# ---------------------------------------------------------------------------
# Section assembly


def _pair_range(spec: SectionSpec, crow: int, b: int) -> tuple[int, int, bool]:
    """Offsets reached by Black and whether the ends are partial."""
    if spec.kind is SectionKind.FINAL:
        return 1 - crow, b - crow, False
    if spec.kind is SectionKind.EVEN:
        return -spec.l, spec.l, True
    return -spec.l, spec.l + 1, True


def pair_cases(spec: SectionSpec, crow: int, b: int) -> list[PairTheftCase]:
    """The pairs a section reaches, clipped to the rows that exist."""
    lo, hi, partial = _pair_range(spec, crow, b)
    out = []
    for j in range(lo, hi + 1):
        if not 1 <= crow + j <= b:
            continue
        if j == 0:
            out.append(PairTheftCase(0, ZERO))
        elif partial and j in (lo, hi):
            out.append(PairTheftCase(j, TERMINAL))
        else:
            out.append(PairTheftCase(j, THROUGH))
    return out


def section_one_grid(p, q, a: int, b: int, col: int, row: int) -> AreaQuadratic:
    """Section I quadratic for canonical anchor ``(col, row)``."""
    p, q = as_exact(p), as_exact(q)
    h, s = p / (2 * a), q / b
    if row == b:
        # Only the top row is reached: a horizontal row problem.
        return row_section_quadratic(p, s, a, col, SectionSpec(SectionKind.EVEN, 1))
    if col == a:
        return AreaQuadratic(xx=F(-3, 4), yy=F(-1, 4), x=-s / 4, y=s / 4, c=h * s)
    if col == 1:
        return AreaQuadratic(xx=F(-3, 4), yy=F(-1, 4), x=s / 4, y=s / 4, c=h * s)
    return AreaQuadratic(xx=F(-1, 2), yy=F(-1, 2), y=s / 2, c=h * s)


def grid_section_quadratic(p, q, a: int, b: int, col: int, row: int, spec: SectionSpec) -> AreaQuadratic:
    """Area of Black's cell in one section of the canonical quadrant of ``(col, row)``."""
    p, q = as_exact(p), as_exact(q)
    if spec.kind is SectionKind.SECTION_I:
        return section_one_grid(p, q, a, b, col, row)
    if col == a:
        # No column to the right: the anchor's column is a row of b points.
        return row_section_quadratic(q, p / a, b, row, spec).swapped()
    return total(pair_quadratic(p, q, a, b, case) for case in pair_cases(spec, row, b))


def grid_area_quadratic(arena: Arena, a: int, b: int, label: SectionLabel) -> AreaQuadratic:
    col, row = label.canonical_anchor
    return grid_section_quadratic(arena.p, arena.q, a, b, col, row, SectionSpec.from_label(label))


def area_grid_closed_form(arena: Arena, a: int, b: int, anchor: tuple[int, int], b1: Point) -> Fraction:
    """Exact area of Black's cell at local offset ``b1`` from grid point ``anchor``."""
    label = section_of_grid(arena, a, b, anchor, b1)
    return grid_area_quadratic(arena, a, b, label).at(label.local)


def grid_section_constraints(p, q, a: int, b: int, col: int, row: int, spec: SectionSpec) -> list[HalfPlane]:
    """Section polygon in the canonical quadrant, built from the row polygon
    of the anchor's column with the axes exchanged."""
    rc = row_section_constraints(as_exact(q), as_exact(p) / a, b, row, spec)
    swapped = [HalfPlane(hp.b, hp.a, hp.c, hp.name) for hp in rc]
    # Row box order is (x_min, x_max, y_min, y_max); after the swap the
    # first two bound y and the next two bound x.
    return [swapped[2], swapped[3], swapped[0], swapped[1]] + swapped[4:]


def grid_sections(b: int, row: int) -> list[SectionSpec]:
    return row_sections(b, row)


def grid_section_number(spec: SectionSpec, b: int, row: int) -> int:
    if spec.kind is SectionKind.SECTION_I:
        return 1
    if spec.kind is SectionKind.FINAL:
        return final_section_number(b, row)
    return 2 * spec.l + (spec.kind is SectionKind.ODD)


def _quadrant_class(a: int, b: int, col: int, row: int) -> QuadrantClass:
    right, up = col < a, row < b
    if right and up:
        return QuadrantClass.CORE
    if up:
        return QuadrantClass.EDGE_VERTICAL
    if right:
        return QuadrantClass.EDGE_HORIZONTAL
    return QuadrantClass.CORNER


def _grid_touching(spec: SectionSpec, b: int, row: int) -> Touching:
    if spec.kind is SectionKind.FINAL:
        return Touching.BOTH
    if spec.kind is SectionKind.SECTION_I:
        return Touching.HIGH if row == b else Touching.NONE
    lo, hi, _ = _pair_range(spec, row, b)
    low, high = row + lo < 1, row + hi > b
    return Touching.LOW if low else Touching.HIGH if high else Touching.NONE


def _grid_branch_name(active: frozenset) -> str:
    """Where an optimum sits, named in the grid frame (``x*`` is the column edge)."""
    on_edge = "cell_edge" in active or "x_max" in active
    on_axis = "axis_h" in active or "y_min" in active
    lower = {"lower", "lower_left", "lower_right", "diag_0"} & active
    if on_edge and on_axis:
        return "edge-axis"
    if on_edge:
        return "edge"
    if lower:
        return "diagonal"
    if active:
        return "side"
    return "interior"


# ---------------------------------------------------------------------------
# Optima


def _grid_record(arena, a, b, col, row, spec, local, value, active, tie=False, table_row=None,
                 rotated=False) -> OptimumRecord:
    """Record for an optimum in the top-right quadrant of ``(col, row)``."""
    whites = grid_sites(arena, a, b)
    origin = grid_site(arena, a, b, col, row)
    absolute = origin + local
    got = None if absolute in whites else cell_area(arena, whites + [absolute], len(whites))
    return OptimumRecord(
        area=value,
        local=local,
        location=absolute,
        anchor=(col, row),
        section=section_name(spec),
        section_number=grid_section_number(spec, b, row),
        touching=_grid_touching(spec, b, row),
        branch=_grid_branch_name(active),
        active=active,
        approach_limit=got is None or got != value,
        attained=got,
        tie=tie,
        rotated=rotated,
        table_row=table_row,
    )


def _edge(arena: Arena, a: int) -> Point:
    """Tie-break target: flat optima are reported on the column edge ``x = p/2a``."""
    return Point(arena.p / (2 * a), 0)


def section_optimum_grid(arena: Arena, a: int, b: int, anchor: tuple[int, int], spec: SectionSpec) -> OptimumRecord:
    """Best placement inside one section of the canonical quadrant of ``anchor``."""
    check_orientation(arena, a, b)
    col, row = anchor
    if not (1 <= col <= a and 1 <= row <= b):
        raise DomainError("anchor outside the grid")
    quad = grid_section_quadratic(arena.p, arena.q, a, b, col, row, spec)
    best = maximize(quad, grid_section_constraints(arena.p, arena.q, a, b, col, row, spec), _edge(arena, a))
    if best is None:
        raise SectionNotPresent(f"section {section_name(spec)} does not meet the quadrant")
    return _grid_record(arena, a, b, col, row, spec, best.point, best.value, best.active)


def _all_grid_optima(arena: Arena, a: int, b: int):
    out = []
    for col in range(1, a + 1):
        for row in range(1, b + 1):
            for spec in grid_sections(b, row):
                quad = grid_section_quadratic(arena.p, arena.q, a, b, col, row, spec)
                best = maximize(quad, grid_section_constraints(arena.p, arena.q, a, b, col, row, spec),
                                _edge(arena, a))
                if best is not None:
                    out.append((best.value, col, row, spec, best))
    return out


def _orbit(arena: Arena, z: Point) -> set[Point]:
    return {Point(x, y) for x in (z.x, arena.p - z.x) for y in (z.y, arena.q - z.y)}


def best_point_grid(arena: Arena, a: int, b: int, rotate: bool = False) -> OptimumRecord:
    """Black's best single placement against an ``a x b`` grid.

    Every section of every canonical quadrant is optimised exactly.  Ties
    prefer the anchor ``(ceil(a/2), ceil(b/2))`` and then the lowest
    section number.  With ``rotate=True`` an arena with ``p/a < q/b`` is
    turned by 90 degrees first; the returned location is mapped back and
    ``rotated`` is set.
    """
    if a < 2 or b < 2:
        raise DomainError("grids need a, b >= 2; use the row solver otherwise")
    if arena.p / a < arena.q / b:
        if not rotate:
            raise OrientationError("grid cells must satisfy p/a >= q/b; pass rotate=True")
        rec = best_point_grid(Arena(arena.q, arena.p), b, a)
        loc, local = rec.location, rec.local
        return OptimumRecord(
            **{**rec.__dict__, "location": Point(loc.y, loc.x), "local": Point(local.y, local.x),
               "anchor": (rec.anchor[1], rec.anchor[0]), "rotated": True}
        )
    centre = ((a + 1) // 2, (b + 1) // 2)
    cands = _all_grid_optima(arena, a, b)
    top = max(c[0] for c in cands)
    winners = [c for c in cands if c[0] == top]
    winners.sort(key=lambda c: ((c[1], c[2]) != centre, abs(c[1] - centre[0]) + abs(c[2] - centre[1]),
                                grid_section_number(c[3], b, c[2]), c[1], c[2]))
    value, col, row, spec, best = winners[0]
    locs = {grid_site(arena, a, b, c[1], c[2]) + c[4].point for c in winners}
    ref = next(iter(locs))
    tie = not locs <= _orbit(arena, ref)
    table = None
    try:
        table = grid_table_row_for(a, b, (arena.p / (2 * a)) / (arena.q / b))
    except (ValueError, ArithmeticError):
        table = None
    return _grid_record(arena, a, b, col, row, spec, best.point, value, best.active, tie=tie,
                        table_row=table)


# ---------------------------------------------------------------------------
# Parametric tables in t = (p/2a)/(q/b)


@dataclass(frozen=True)
class GridTableRow:
    """One row of a best-point table for an ``a x b`` grid.

    With ``s = q/b`` and ``t = (p/2a)/s`` the optimum sits at local
    ``(loc_x(t)*s, loc_y(t)*s)`` from ``anchor`` and steals
    ``area_t(t)*s^2``; the row applies for ``lo <= t <= hi``.
    """

    a: int
    b: int
    anchor: tuple[int, int]
    section: str
    section_number: int
    touching: Touching
    quadrant: QuadrantClass
    branch: str
    loc_x: Poly2
    loc_y: Poly2
    area_t: Poly2
    lo: Surd
    hi: Optional[Surd]

    def location(self, p, q) -> Point:
        s = as_exact(q) / self.b
        t = as_exact(p) / (2 * self.a) / s
        return Point(self.loc_x(t) * s, self.loc_y(t) * s)

    def area(self, p, q) -> Fraction:
        s = as_exact(q) / self.b
        t = as_exact(p) / (2 * self.a) / s
        return self.area_t(t) * s * s

    def contains(self, t) -> bool:
        return self.lo.compare(t) <= 0 and (self.hi is None or self.hi.compare(t) >= 0)

    def describe(self) -> str:
        hi = "inf" if self.hi is None else str(self.hi)
        return (f"anchor {self.anchor}, Section {self.section_number} ({self.section}, {self.branch}) "
                f"for {self.lo} <= (p/2a)/(q/b) <= {hi}")


def _grid_problem(a: int, b: int, col: int, row: int, spec: SectionSpec):
    def problem(t: Fraction):
        # s = q/b = 1 and p/2a = t.
        p, q = 2 * a * F(t), F(b)
        return (grid_section_quadratic(p, q, a, b, col, row, spec),
                grid_section_constraints(p, q, a, b, col, row, spec))

    return problem


def _grid_appearance(b: int, row: int, spec: SectionSpec) -> Fraction:
    """Smallest ``t`` at which the section meets the quadrant (``t >= 1/2``)."""
    if spec.kind is SectionKind.SECTION_I:
        return F(1, 2)
    if spec.kind is SectionKind.EVEN:
        start = F(spec.l - 1)
    elif spec.kind is SectionKind.ODD:
        start = F(2 * spec.l - 1, 2)
    else:
        lo_a, lo_b = F(row - 1), F(b - row)
        ys = [F(0), F(1, 2), (lo_b - lo_a) / 2]
        start = min(max(lo_a + y, lo_b - y) for y in ys if 0 <= y <= F(1, 2))
    return max(F(1, 2), start)


@functools.lru_cache(maxsize=None)
def grid_table(a: int, b: int) -> tuple[GridTableRow, ...]:
    """Exact best-point table for an ``a x b`` grid, tiled in ``t = (p/2a)/(q/b) >= 1/2``.

    Ties between sections keep the lower section.
    """
    if a < 2 or b < 2:
        raise DomainError("grids need a, b >= 2")
    t_end = F(b, 2) + 3
    step = F(1, 8)
    # The central anchor always carries the global optimum (checked against
    # the all-anchor search in the tests), so the table follows it alone.
    anchors = [((a + 1) // 2, (b + 1) // 2)]
    branches: list[Branch] = []
    order = {}
    for col, row in anchors:
        for spec in grid_sections(b, row):
            key = (col, row, spec)
            order[key] = len(order)
            branches.extend(section_branches(key, _grid_problem(a, b, col, row, spec),
                                             _grid_appearance(b, row, spec), t_end, step,
                                             anchor=lambda t: Point(t, 0)))
    pieces = parametric_envelope(branches, F(1, 2), t_end, priority=lambda br: order[br.key])
    rows = []
    for k, pc in enumerate(pieces):
        col, row, spec = pc.branch.key
        rows.append(GridTableRow(
            a=a, b=b, anchor=(col, row), section=section_name(spec),
            section_number=grid_section_number(spec, b, row), touching=_grid_touching(spec, b, row),
            quadrant=_quadrant_class(a, b, col, row), branch=_grid_branch_name(pc.branch.active),
            loc_x=pc.branch.loc_x, loc_y=pc.branch.loc_y, area_t=pc.branch.value,
            lo=pc.lo, hi=None if k == len(pieces) - 1 else pc.hi,
        ))
    _check_tail(rows[-1], branches, t_end)
    return tuple(rows)


def grid_table_row_for(a: int, b: int, t) -> GridTableRow:
    t = as_exact(t)
    for row in grid_table(a, b):
        if row.contains(t):
            return row
    raise ValueError(f"no table row covers t={t}")


# ---------------------------------------------------------------------------
# Grid sandwich


def black_grid_arrangement(arena: Arena, a: int, b: int, delta=None) -> BlackArrangement:
    """Black's column-wise sandwich against an ``a x b`` grid.

    Each White column gets the row sandwich turned by 90 degrees: pairs at
    ``x_j +- q/2b`` level with the midpoint of rows ``2k-1`` and ``2k``.
    For odd ``b`` the unpaired top point of every column is approached from
    below by ``delta`` (default ``q/10^6``) and ``approach_limit`` is set.
    The construction is a heuristic; no optimality is claimed.
    """
    if a < 2 or b < 2:
        raise DomainError("the grid sandwich needs a, b >= 2; use the row arrangement for a single line")
    p, q = arena.p, arena.q
    s = q / b
    delta = q / 10**6 if delta is None else as_exact(delta)
    if not 0 < delta < s / 2:
        raise DomainError("delta must lie strictly between 0 and half a row pitch")
    out = []
    for j in range(1, a + 1):
        x = (2 * j - 1) * p / (2 * a)
        for k in range(1, b // 2 + 1):
            y = (2 * k - 1) * s
            out.append(Point(x - s / 2, y))
            out.append(Point(x + s / 2, y))
        if b % 2:
            out.append(Point(x, q - s / 2 - delta))
    return BlackArrangement(tuple(out), approach_limit=bool(b % 2), heuristic=True,
                            delta=delta if b % 2 else None)
