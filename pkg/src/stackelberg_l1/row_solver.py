"""Closed-form areas and best points when White plays a row.

Black's cell is assembled cell by cell.  With ``w_i`` at the origin and
Black at ``(x, y)`` in the canonical quadrant, the area taken from each
White cell is one of a handful of quadratics (own cell, partial or full
theft from a cell on the left, partial or full theft from a cell on the
right).  A section label says which White cells are reached and whether the
outermost one is only partially entered, so the total is just a sum.

Best points are found by exact constrained maximisation of these
quadratics over each section polygon.  :func:`row_table` follows the
winning section as ``q/(p/n)`` grows and returns the breakpoints as exact
surds; it reproduces the structure of the reference best-point tables
after the odd-section constant is corrected (see the README).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .core_geometry import Arena, Point, as_exact, cell_area, cell_pieces, row_sites
from .errors import DomainError, SectionNotPresent
from .exact_opt import (
    AreaQuadratic,
    Branch,
    HalfPlane,
    Poly2,
    Surd,
    box,
    maximize,
    parametric_envelope,
    section_branches,
    total,
)
from .partition import SectionKind, SectionLabel, Touching, final_section_number, section_of_row

F = Fraction

__all__ = [
    "AreaQuadratic",
    "OptimumRecord",
    "SectionSpec",
    "TableRow",
    "area_row_closed_form",
    "best_point_row",
    "row_area_quadratic",
    "row_table",
    "BlackArrangement",
    "ScoreReport",
    "approach_sequence",
    "black_row_arrangement",
    "limit_black_score",
    "sandwich_points",
    "sandwich_condition_holds",
    "sandwich_prediction",
    "score_arrangement",
    "section_optimum_row",
]


# ---------------------------------------------------------------------------
# Per-cell thefts (local frame of w_i, canonical quadrant)


def own_cell(p: Fraction, q: Fraction, n: int) -> AreaQuadratic:
    """Area taken from ``w_i``'s own cell when Black is above Section I."""
    return AreaQuadratic(xx=F(-1, 2), y=-p / (2 * n), c=p * q / (2 * n))


def partial_left(p: Fraction, q: Fraction, n: int, m: int) -> AreaQuadratic:
    """Partial theft from the cell ``m`` places to the left (the last one reached)."""
    k = m - 1
    return AreaQuadratic(
        xx=F(1, 8), yy=F(-3, 8), xy=F(1, 4),
        x=k * p / (4 * n) - q / 4, y=k * p / (4 * n) + q / 4,
        c=-k * p * q / (4 * n) + k * k * p * p / (8 * n * n),
    )


def full_left(p: Fraction, q: Fraction, n: int, m: int) -> AreaQuadratic:
    """Theft from a cell ``m`` places to the left that Black crosses completely."""
    return AreaQuadratic(x=-p / (2 * n), y=-p / (2 * n), c=p * q / (2 * n) - (4 * m - 1) * p * p / (8 * n * n))


def partial_right(p: Fraction, q: Fraction, n: int, m: int) -> AreaQuadratic:
    """Mirror image of :func:`partial_left` for a cell on the right."""
    return AreaQuadratic(*_reflect_x(partial_left(p, q, n, m)))


def full_right(p: Fraction, q: Fraction, n: int, m: int) -> AreaQuadratic:
    return AreaQuadratic(*_reflect_x(full_left(p, q, n, m)))


def _reflect_x(qd: AreaQuadratic) -> tuple:
    return (qd.xx, qd.yy, -qd.xy, -qd.x, qd.y, qd.c)


def section_one(p: Fraction, q: Fraction, n: int, i: int) -> AreaQuadratic:
    """Total area for Section I (only the own cell and its right neighbour)."""
    if i < n:
        return AreaQuadratic(yy=F(-1), c=p * q / (2 * n))
    return AreaQuadratic(yy=F(-1, 2), x=-q / 2, c=p * q / (2 * n))


@dataclass(frozen=True)
class SectionSpec:
    """A section of the canonical quadrant of anchor ``i`` (``l`` is ``None``
    for Section I and for the final section)."""

    kind: SectionKind
    l: Optional[int] = None

    @staticmethod
    def from_label(label: SectionLabel) -> "SectionSpec":
        return SectionSpec(label.kind, label.l)


def _touched_range(spec: SectionSpec, i: int) -> tuple[int, int]:
    if spec.kind is SectionKind.EVEN:
        return i - spec.l, i + spec.l
    if spec.kind is SectionKind.ODD:
        return i - spec.l, i + spec.l + 1
    raise ValueError(spec)


def row_section_quadratic(p, q, n: int, i: int, spec: SectionSpec) -> AreaQuadratic:
    """Area of Black's cell as a quadratic in local ``(x, y)``."""
    p, q = as_exact(p), as_exact(q)
    if spec.kind is SectionKind.SECTION_I:
        return section_one(p, q, n, i)
    if spec.kind is SectionKind.FINAL:
        lo, hi = 0, n + 1
    else:
        lo, hi = _touched_range(spec, i)
    parts = [own_cell(p, q, n)]
    for j in range(max(lo, 1), i):
        parts.append(partial_left(p, q, n, i - j) if j == lo else full_left(p, q, n, i - j))
    for k in range(i + 1, min(hi, n) + 1):
        parts.append(partial_right(p, q, n, k - i) if k == hi else full_right(p, q, n, k - i))
    return total(parts)


def row_area_quadratic(arena: Arena, n: int, label: SectionLabel) -> AreaQuadratic:
    return row_section_quadratic(arena.p, arena.q, n, label.canonical_anchor, SectionSpec.from_label(label))


def area_row_closed_form(arena: Arena, n: int, i: int, b1: Point) -> Fraction:
    """Exact area of Black's cell at local offset ``b1`` from ``w_i``."""
    label = section_of_row(arena, n, i, b1)
    return row_area_quadratic(arena, n, label).at(label.local)


# ---------------------------------------------------------------------------
# Section polygons and optima


def row_section_constraints(p, q, n: int, i: int, spec: SectionSpec) -> list[HalfPlane]:
    """Closed section polygon in the canonical quadrant as half-planes."""
    P = F(p) / n
    cons = box(0, P / 2, 0, F(q) / 2, ("axis_v", "cell_edge", "axis_h", "arena_top"))
    if spec.kind is SectionKind.SECTION_I:
        cons.append(HalfPlane(F(-1), F(1), F(0), "diag_0"))
    elif spec.kind is SectionKind.EVEN:
        cons.append(HalfPlane(F(1), F(-1), -(spec.l - 1) * P, "lower"))
        cons.append(HalfPlane(F(1), F(1), spec.l * P, "upper"))
    elif spec.kind is SectionKind.ODD:
        cons.append(HalfPlane(F(-1), F(-1), -spec.l * P, "lower"))
        cons.append(HalfPlane(F(-1), F(1), spec.l * P, "upper"))
    else:
        cons.append(HalfPlane(F(1), F(-1), -(i - 1) * P, "lower_left"))
        cons.append(HalfPlane(F(-1), F(-1), -(n - i) * P, "lower_right"))
    return cons


def row_sections(n: int, i: int) -> list[SectionSpec]:
    """All sections of anchor ``i``'s canonical quadrant, in order."""
    out = [SectionSpec(SectionKind.SECTION_I)]
    final = final_section_number(n, i)
    for number in range(2, final):
        out.append(SectionSpec(SectionKind.EVEN if number % 2 == 0 else SectionKind.ODD, number // 2))
    out.append(SectionSpec(SectionKind.FINAL))
    return out


def section_number(spec: SectionSpec, n: int, i: int) -> int:
    if spec.kind is SectionKind.SECTION_I:
        return 1
    if spec.kind is SectionKind.FINAL:
        return final_section_number(n, i)
    return 2 * spec.l + (spec.kind is SectionKind.ODD)


def section_touching(spec: SectionSpec, n: int, i: int) -> Touching:
    if spec.kind is SectionKind.FINAL:
        return Touching.BOTH
    if spec.kind is SectionKind.SECTION_I:
        return Touching.HIGH if i == n else Touching.NONE
    lo, hi = _touched_range(spec, i)
    low, high = lo < 1, hi > n
    return Touching.LOW if low else Touching.HIGH if high else Touching.NONE


def section_name(spec: SectionSpec) -> str:
    if spec.kind is SectionKind.SECTION_I:
        return "I"
    if spec.kind is SectionKind.FINAL:
        return "Final"
    return f"{'Even' if spec.kind is SectionKind.EVEN else 'Odd'}{{{spec.l}}}"


def _branch_name(active: frozenset) -> str:
    """Human description of where a section optimum sits."""
    lower = {"lower", "lower_left", "lower_right", "diag_0"} & active
    upper = {"upper", "arena_top"} & active
    if lower and upper:
        return "corner"
    if lower:
        return "bottom"
    if upper:
        return "top"
    if active:
        return "middle"
    return "interior"


@dataclass(frozen=True)
class OptimumRecord:
    """An optimum of Black's stolen area.

    ``local`` is in the canonical quadrant of ``anchor``; ``location`` is the
    absolute point in the arena.  ``approach_limit`` is set when the value
    is a supremum: Black cannot stand on the optimum itself (it coincides
    with a White point) or standing there yields strictly less area under
    the tie convention.  ``attained`` is the exact area at the location, or
    ``None`` when it coincides with a White point.
    """

    area: Fraction
    local: Point
    location: Point
    anchor: Union[int, tuple[int, int]]
    section: str
    section_number: int
    touching: Touching
    branch: str
    active: frozenset
    approach_limit: bool
    attained: Optional[Fraction]
    tie: bool = False
    rotated: bool = False
    table_row: Optional["TableRow"] = None
    note: str = ""


def _attained(arena: Arena, sites: list[Point], z: Point) -> Optional[Fraction]:
    if z in sites:
        return None
    return cell_area(arena, sites + [z], len(sites))


def section_optimum_row(arena: Arena, n: int, i: int, section: Union[SectionSpec, SectionLabel]) -> OptimumRecord:
    """Best placement of Black inside one section of ``w_i``'s quadrant."""
    spec = SectionSpec.from_label(section) if isinstance(section, SectionLabel) else section
    if not 1 <= i <= n:
        raise DomainError("need 1 <= i <= n")
    quad = row_section_quadratic(arena.p, arena.q, n, i, spec)
    cons = row_section_constraints(arena.p, arena.q, n, i, spec)
    best = maximize(quad, cons)
    if best is None:
        raise SectionNotPresent(f"section {section_name(spec)} does not meet the quadrant")
    return _record(arena, n, i, spec, best.point, best.value, best.active)


def _record(arena, n, i, spec, local, value, active, tie=False, table_row=None) -> OptimumRecord:
    sites = row_sites(arena, n)
    absolute = sites[i - 1] + local
    got = _attained(arena, sites, absolute)
    return OptimumRecord(
        area=value,
        local=local,
        location=absolute,
        anchor=i,
        section=section_name(spec),
        section_number=section_number(spec, n, i),
        touching=section_touching(spec, n, i),
        branch=_branch_name(active),
        active=active,
        approach_limit=got is None or got != value,
        attained=got,
        tie=tie,
        table_row=table_row,
    )


def all_section_optima(arena: Arena, n: int, anchors: Optional[Sequence[int]] = None) -> list[OptimumRecord]:
    anchors = range(1, n + 1) if anchors is None else anchors
    out = []
    for i in anchors:
        for spec in row_sections(n, i):
            quad = row_section_quadratic(arena.p, arena.q, n, i, spec)
            best = maximize(quad, row_section_constraints(arena.p, arena.q, n, i, spec))
            if best is not None:
                out.append((best.value, i, spec, best))
    return out


def best_point_row(arena: Arena, n: int) -> OptimumRecord:
    """Black's best single placement against a row of ``n`` White points.

    Every section of every anchor is optimised exactly.  Among equal areas
    the central anchor ``ceil(n/2)`` and then the lowest section number are
    preferred; ``tie`` reports whether a different location reaches the
    same value.
    """
    if n < 1:
        raise DomainError("n must be positive")
    centre = (n + 1) // 2
    cands = all_section_optima(arena, n)
    top = max(c[0] for c in cands)
    winners = [c for c in cands if c[0] == top]
    winners.sort(key=lambda c: (abs(c[1] - centre), c[1] != centre, section_number(c[2], n, c[1])))
    value, i, spec, best = winners[0]
    sites = row_sites(arena, n)
    locs = {sites[c[1] - 1] + c[3].point for c in winners}
    tie = len(locs) > 1 and not _mirror_only(arena, locs)
    row = None
    try:
        row = table_row_for(n, arena.q / (arena.p / n))
    except (ValueError, ArithmeticError):
        row = None
    rec = _record(arena, n, i, spec, best.point, value, best.active, tie=tie, table_row=row)
    return rec


def _mirror_only(arena: Arena, locs: set[Point]) -> bool:
    """True when all locations are images of one another under the arena's
    symmetries (which never counts as a genuine tie)."""
    ref = next(iter(locs))
    orbit = {
        Point(x, y)
        for x in (ref.x, arena.p - ref.x)
        for y in (ref.y, arena.q - ref.y)
    }
    return locs <= orbit


# ---------------------------------------------------------------------------
# Parametric best-point tables


@dataclass(frozen=True)
class TableRow:
    """One row of a best-point table for a row of ``n`` White points.

    With ``P = p/n`` and ``t = q/P``, the optimum is at local
    ``(x0*P + x1*q, y0*P + y1*q)`` from the central anchor and steals
    ``a0*P^2 + a1*P*q + a2*q^2``; the row applies for ``lo <= t <= hi``
    (``hi`` is ``None`` for the last row).
    """

    n: int
    anchor: int
    section: str
    section_number: int
    touching: Touching
    branch: str
    loc_x: Poly2
    loc_y: Poly2
    area_t: Poly2
    lo: Surd
    hi: Optional[Surd]

    def location(self, p, q) -> Point:
        P = as_exact(p) / self.n
        t = as_exact(q) / P
        return Point(self.loc_x(t) * P, self.loc_y(t) * P)

    def area(self, p, q) -> Fraction:
        P = as_exact(p) / self.n
        t = as_exact(q) / P
        return self.area_t(t) * P * P

    def contains(self, t) -> bool:
        return self.lo.compare(t) <= 0 and (self.hi is None or self.hi.compare(t) >= 0)

    def describe(self) -> str:
        hi = "inf" if self.hi is None else str(self.hi)
        return f"Section {self.section_number} ({self.section}, {self.branch}) for {self.lo} <= q/(p/n) <= {hi}"


def _row_problem(n: int, i: int, spec: SectionSpec):
    def problem(t: Fraction):
        p, q = F(n), F(t)
        return row_section_quadratic(p, q, n, i, spec), row_section_constraints(p, q, n, i, spec)

    return problem


def _appearance(n: int, i: int, spec: SectionSpec) -> Fraction:
    """Smallest ``t = q/P`` at which the section meets the quadrant."""
    if spec.kind is SectionKind.SECTION_I:
        return F(0)
    if spec.kind is SectionKind.EVEN:
        return F(2 * (spec.l - 1))
    if spec.kind is SectionKind.ODD:
        return F(2 * spec.l - 1)
    # The final region {y >= x + (i-1)P, y >= (n-i)P - x} meets the quadrant
    # once q/2 exceeds its lowest point on 0 <= x <= P/2.
    a, b = F(i - 1), F(n - i)
    xs = [F(0), F(1, 2), (b - a) / 2]
    best = min(max(a + x, b - x) for x in xs if 0 <= x <= F(1, 2))
    return 2 * best


@functools.lru_cache(maxsize=None)
def row_table(n: int, anchor: Optional[int] = None) -> tuple[TableRow, ...]:
    """Exact best-point table for a row of ``n`` points, tiled in ``t = q/(p/n)``.

    Rows are computed by following every section optimum of the anchor's
    quadrant (``ceil(n/2)`` by default) and taking the upper envelope.
    """
    i = (n + 1) // 2 if anchor is None else anchor
    t_end = F(2 * n + 12)
    step = F(1, 16)
    branches: list[Branch] = []
    specs = row_sections(n, i)
    for spec in specs:
        start = _appearance(n, i, spec)
        branches.extend(section_branches(spec, _row_problem(n, i, spec), start, t_end, step))
    order = {spec: k for k, spec in enumerate(specs)}
    pieces = parametric_envelope(branches, F(0), t_end, priority=lambda br: order[br.key])
    rows = []
    for k, pc in enumerate(pieces):
        spec = pc.branch.key
        rows.append(
            TableRow(
                n=n, anchor=i, section=section_name(spec), section_number=section_number(spec, n, i),
                touching=section_touching(spec, n, i), branch=_branch_name(pc.branch.active),
                loc_x=pc.branch.loc_x, loc_y=pc.branch.loc_y, area_t=pc.branch.value,
                lo=pc.lo, hi=None if k == len(pieces) - 1 else pc.hi,
            )
        )
    _check_tail(rows[-1], branches, t_end)
    return tuple(rows)


def _check_tail(last: TableRow, branches: Sequence[Branch], t_end: Fraction) -> None:
    """The final row must win for every larger ``t`` too."""
    for br in branches:
        if br.hi is not None:
            continue
        diff = last.area_t - br.value
        if diff.is_zero():
            continue
        roots = [r for r in diff.roots() if r.compare(t_end) > 0]
        if roots or diff(t_end * 10) < 0:
            raise ArithmeticError("table tail is not stable; extend the parameter range")


def table_row_for(n: int, t) -> TableRow:
    t = as_exact(t)
    for row in row_table(n):
        if row.contains(t):
            return row
    raise ValueError(f"no table row covers t={t}")


# ---------------------------------------------------------------------------
# Arrangements and scores


@dataclass(frozen=True)
class BlackArrangement:
    """Black's points plus flags describing how they were built.

    ``approach_limit`` is set when some point stands in for a limit position
    (it sits ``delta`` away from a White point); ``heuristic`` when no
    optimality is claimed for the construction.
    """

    points: tuple[Point, ...]
    approach_limit: bool = False
    heuristic: bool = False
    delta: Optional[Fraction] = None

    def __iter__(self):
        return iter(self.points)

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class ScoreReport:
    """Exact areas won by each player; ``per_site`` follows the input order
    (Whites first).  ``degenerate`` is set when a two-dimensional L1 tie
    had to be resolved."""

    white_total: Fraction
    black_total: Fraction
    per_site: tuple[tuple[Point, str, Fraction], ...]
    degenerate: bool = False

    def __post_init__(self) -> None:
        if any(area < 0 for _, _, area in self.per_site):
            raise ArithmeticError("negative cell area")


def sandwich_points(arena: Arena, n: int) -> list[Point]:
    """The ``2*floor(n/2)`` sandwich points: one above and one below the row
    at the midpoint of each pair ``(w_{2k-1}, w_{2k})``."""
    p, q = arena.p, arena.q
    out = []
    for k in range(1, n // 2 + 1):
        x = (2 * k - 1) * p / n
        out.append(Point(x, q / 2 + p / (2 * n)))
        out.append(Point(x, q / 2 - p / (2 * n)))
    return out


def black_row_arrangement(arena: Arena, n: int, delta=None) -> BlackArrangement:
    """Black's sandwich against a row of ``n`` White points.

    For odd ``n`` the unpaired ``w_n`` is approached from the left by
    ``delta`` (default ``p/10^6``).
    """
    if n < 2:
        raise DomainError("the sandwich needs n >= 2")
    pts = sandwich_points(arena, n)
    if n % 2 == 0:
        return BlackArrangement(tuple(pts))
    delta = arena.p / 10**6 if delta is None else as_exact(delta)
    if not 0 < delta < arena.p / n:
        raise DomainError("delta must lie strictly between 0 and p/n")
    last = row_sites(arena, n)[-1]
    pts.append(Point(last.x - delta, last.y))
    return BlackArrangement(tuple(pts), approach_limit=True, delta=delta)


def score_arrangement(arena: Arena, whites: Sequence[Point], blacks: Sequence[Point]) -> ScoreReport:
    """Exact areas of every site when both players' points are present.

    White-Black ties on a two-dimensional L1 region go to Black, who could
    claim them by an arbitrarily small move; ties within one colour are
    split by Euclidean distance.
    """
    whites, blacks = list(whites), list(blacks)
    sites = whites + blacks
    if not whites:
        raise DomainError("White needs at least one point")
    priority = [0] * len(whites) + [1] * len(blacks)
    per_site = []
    degenerate = False
    w_total = b_total = F(0)
    for k, site in enumerate(sites):
        cp = cell_pieces(arena, sites, k, priority)
        degenerate = degenerate or cp.degenerate_used
        colour = "white" if k < len(whites) else "black"
        per_site.append((site, colour, cp.area))
        if colour == "white":
            w_total += cp.area
        else:
            b_total += cp.area
    if w_total + b_total != arena.area:
        raise ArithmeticError(f"cells cover {w_total + b_total}, arena has {arena.area}")
    return ScoreReport(w_total, b_total, tuple(per_site), degenerate)


def limit_black_score(arena: Arena, n: int) -> Fraction:
    """Black's sandwich score in the limit ``delta -> 0`` (odd ``n``).

    For small ``delta`` the score is a polynomial of degree at most two in
    ``delta``; it is sampled at three offsets, checked at a fourth and
    evaluated at zero.
    """
    whites = row_sites(arena, n)
    if n % 2 == 0:
        return score_arrangement(arena, whites, black_row_arrangement(arena, n)).black_total
    unit = arena.p / (n * 10**4)
    samples = [score_arrangement(arena, whites, black_row_arrangement(arena, n, k * unit)).black_total
               for k in (1, 2, 3, 4)]
    poly = Poly2.interpolate(samples[:3])  # values at k = 0, 1, 2 stand for delta = unit*(k+1)
    if poly(3) != samples[3]:
        raise ArithmeticError("score is not quadratic in delta near zero")
    return poly(-1)


def sandwich_prediction(arena: Arena, n: int) -> Fraction:
    """The closed-form sandwich score ``pq - 3p^2/4n``."""
    return arena.p * arena.q - 3 * arena.p * arena.p / (4 * n)


def sandwich_condition_holds(arena: Arena, n: int) -> bool:
    """Exact test of ``q >= (4 - sqrt 3) p/n``."""
    return Surd.make(4, -1, 3).compare(arena.q * n / arena.p) <= 0


# ---------------------------------------------------------------------------
# Approach limit


def approach_sequence(arena: Arena, n: int, ks: Sequence[int] = range(1, 7), anchor: Optional[int] = None):
    """Black approaching ``w_anchor`` inside Section I.

    Black stands at local ``(d, d/2)`` with ``d = 10^-k``.  Returns tuples
    ``(k, point, area, shortfall)`` where ``shortfall = pq/2n - area``.
    """
    i = (n + 1) // 2 if anchor is None else anchor
    whites = row_sites(arena, n)
    target = arena.p * arena.q / (2 * n)
    out = []
    for k in ks:
        d = F(1, 10**k)
        if d >= arena.p / (2 * n) or d / 2 >= arena.q / 2:
            raise DomainError("approach step does not fit inside the cell")
        z = whites[i - 1] + Point(d, d / 2)
        area = cell_area(arena, whites + [z], n)
        out.append((k, z, area, target - area))
    return out
