"""Section labels for a Black point placed inside a White cell.

A White cell is cut by the configuration lines of the White points (the
horizontal, vertical and diagonal lines through each of them).  Inside a
quadrant of the cell the resulting pieces are called *sections*; the
shape of Black's Voronoi cell is algebraically the same everywhere inside
one section.

All functions take the Black point in *local* coordinates, i.e. relative to
the anchor White point.  Points in any quadrant are accepted: they are
reflected into the top-right (canonical) quadrant first and the label
records the reflections together with the re-indexed anchor.

For a row, with ``P = p/n`` and local ``(x, y)`` in the canonical quadrant,
put ``dl = (y - x)/P`` and ``dr = (y + x)/P``.  Section I is ``y < x``.
Otherwise the section number is ``floor(dl) + floor(dr) + 2`` and the cells
touched by Black run from ``i - floor(dl) - 1`` to ``i + floor(dr) + 1``.
The grid partition is the row partition reflected in the line ``y = x``,
with the row ``n`` replaced by the number of grid rows ``b`` and ``P`` by
``q/b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from .core_geometry import Arena, Point, as_exact
from .errors import DomainError, OnBoundary, OrientationError, OutOfQuadrant

__all__ = [
    "ConfigLine",
    "QuadrantClass",
    "SectionKind",
    "SectionLabel",
    "Touching",
    "final_section_number",
    "grid_contacts",
    "row_contacts",
    "section_of_grid",
    "section_of_row",
    "square_grid_feasible",
]


class SectionKind(Enum):
    SECTION_I = "I"
    EVEN = "even"
    ODD = "odd"
    FINAL = "final"


class Touching(Enum):
    """Which ends of the White line Black's cell reaches.

    For a row ``LOW``/``HIGH`` are the left/right arena edges.  For a grid
    they are the bottom/top edges reached along the anchor's column.
    """

    NONE = "none"
    LOW = "low"
    HIGH = "high"
    BOTH = "both"


class QuadrantClass(Enum):
    """Which neighbours of a grid anchor exist on the canonical side."""

    CORE = "core"
    EDGE_VERTICAL = "edge-vertical"
    EDGE_HORIZONTAL = "edge-horizontal"
    CORNER = "corner"


_ROMAN = [(1000, "M"), (900, "CM"), (500, "D"), (400, "CD"), (100, "C"), (90, "XC"),
          (50, "L"), (40, "XL"), (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I")]


def roman(k: int) -> str:
    out = []
    for value, sym in _ROMAN:
        while k >= value:
            out.append(sym)
            k -= value
    return "".join(out)


@dataclass(frozen=True)
class SectionLabel:
    """Label of a section in the canonical quadrant of an anchor.

    ``number`` is the section number (1 for Section I, ``2l`` or ``2l+1``
    otherwise).  For the final section, which touches both ends, it is the
    first section number that does so.  ``local`` holds the canonical
    (reflected) local coordinates.
    """

    family: str
    kind: SectionKind
    l: Optional[int]
    number: int
    touching: Touching
    anchor: Union[int, tuple[int, int]]
    canonical_anchor: Union[int, tuple[int, int]]
    flip_x: bool
    flip_y: bool
    local: Point
    quadrant_class: Optional[QuadrantClass] = None

    @property
    def roman(self) -> str:
        return roman(self.number)

    @property
    def name(self) -> str:
        if self.kind is SectionKind.SECTION_I:
            return "I"
        if self.kind is SectionKind.EVEN:
            return f"Even{{{self.l}}}"
        if self.kind is SectionKind.ODD:
            return f"Odd{{{self.l}}}"
        return "Final"


def final_section_number(n: int, i: int) -> int:
    """First section number whose cell touches both ends of a length-``n`` line."""
    even = 2 * max(i, n - i + 1)
    odd = 2 * max(i, n - i) + 1
    return min(even, odd)


def _classify(x: Fraction, y: Fraction, step: Fraction, n: int, i: int):
    """Shared row/grid logic on canonical coordinates ``x`` (along the line)
    and ``y`` (across it).  Returns ``(kind, l, number, touching)``."""
    if y < x:
        return SectionKind.SECTION_I, None, 1, (Touching.HIGH if i == n else Touching.NONE)
    dl, dr = (y - x) / step, (y + x) / step
    if dl.denominator == 1 or dr.denominator == 1:
        raise OnBoundary("point lies on a configuration line")
    fl, fr = math.floor(dl), math.floor(dr)
    lo, hi = i - fl - 1, i + fr + 1
    low, high = lo < 1, hi > n
    if low and high:
        return SectionKind.FINAL, None, final_section_number(n, i), Touching.BOTH
    touching = Touching.LOW if low else Touching.HIGH if high else Touching.NONE
    kind = SectionKind.EVEN if fr == fl else SectionKind.ODD
    return kind, fl + 1, fl + fr + 2, touching


def _local_checks(dx: Fraction, dy: Fraction, hx: Fraction, hy: Fraction) -> None:
    if abs(dx) > hx or abs(dy) > hy:
        raise OutOfQuadrant("point lies outside the anchor's cell")
    if dx == 0 or dy == 0 or abs(dx) == hx or abs(dy) == hy or abs(dx) == abs(dy):
        raise OnBoundary("point lies on a quadrant edge or configuration line")


def section_of_row(arena: Arena, n: int, i: int, b1: Point) -> SectionLabel:
    """Label of the local point ``b1`` relative to row point ``w_i``."""
    if n < 1 or not 1 <= i <= n:
        raise DomainError("need 1 <= i <= n")
    step = arena.p / n
    dx, dy = as_exact(b1.x), as_exact(b1.y)
    _local_checks(dx, dy, step / 2, arena.q / 2)
    flip_x, flip_y = dx < 0, dy < 0
    ci = n + 1 - i if flip_x else i
    x, y = abs(dx), abs(dy)
    kind, l, number, touching = _classify(x, y, step, n, ci)
    return SectionLabel("row", kind, l, number, touching, i, ci, flip_x, flip_y, Point(x, y))


def check_orientation(arena: Arena, a: int, b: int) -> None:
    if a < 1 or b < 1:
        raise DomainError("grid dimensions must be positive")
    if arena.p / a < arena.q / b:
        raise OrientationError("grid cells must satisfy p/a >= q/b; rotate the arena")


def section_of_grid(arena: Arena, a: int, b: int, anchor: tuple[int, int], b1: Point) -> SectionLabel:
    """Label of the local point ``b1`` relative to grid point ``anchor = (col, row)``."""
    check_orientation(arena, a, b)
    col, row = anchor
    if not (1 <= col <= a and 1 <= row <= b):
        raise DomainError("anchor outside the grid")
    step = arena.q / b
    dx, dy = as_exact(b1.x), as_exact(b1.y)
    _local_checks(dx, dy, arena.p / (2 * a), arena.q / (2 * b))
    flip_x, flip_y = dx < 0, dy < 0
    ccol = a + 1 - col if flip_x else col
    crow = b + 1 - row if flip_y else row
    x, y = abs(dx), abs(dy)
    # Reflect in y = x: the column direction plays the role of the row.
    kind, l, number, touching = _classify(y, x, step, b, crow)
    has_right, has_up = ccol < a, crow < b
    if has_right and has_up:
        qc = QuadrantClass.CORE
    elif has_up:
        qc = QuadrantClass.EDGE_VERTICAL
    elif has_right:
        qc = QuadrantClass.EDGE_HORIZONTAL
    else:
        qc = QuadrantClass.CORNER
    return SectionLabel("grid", kind, l, number, touching, (col, row), (ccol, crow), flip_x, flip_y, Point(x, y), qc)


def touched_offsets(label: SectionLabel, n: int) -> list[int]:
    """Offsets ``j`` (relative to the canonical anchor) of the White points
    along the line that Black's cell reaches, restricted to existing ones."""
    ci = label.canonical_anchor if label.family == "row" else label.canonical_anchor[1]
    if label.kind is SectionKind.SECTION_I:
        lo, hi = 0, 1
    elif label.kind is SectionKind.FINAL:
        lo, hi = 1 - ci, n - ci
    else:
        lo = -label.l
        hi = label.l if label.kind is SectionKind.EVEN else label.l + 1
    return [j for j in range(lo, hi + 1) if 1 <= ci + j <= n]


def row_contacts(label: SectionLabel, n: int) -> set[int]:
    """Indices (1-based, original orientation) of White cells Black steals from."""
    ci = label.canonical_anchor
    idx = {ci + j for j in touched_offsets(label, n)}
    return {n + 1 - k for k in idx} if label.flip_x else idx


def grid_contacts(label: SectionLabel, a: int, b: int) -> set[tuple[int, int]]:
    """Grid cells ``(col, row)`` (original orientation) Black steals from."""
    ccol, crow = label.canonical_anchor
    cells: set[tuple[int, int]] = set()
    if label.kind is SectionKind.SECTION_I:
        for dr in (0, 1):
            for dc in (-1, 0, 1):
                cells.add((ccol + dc, crow + dr))
    else:
        for j in touched_offsets(label, b):
            cells.add((ccol, crow + j))
            cells.add((ccol + 1, crow + j))
    cells = {(c, r) for c, r in cells if 1 <= c <= a and 1 <= r <= b}
    out = set()
    for c, r in cells:
        out.add((a + 1 - c if label.flip_x else c, b + 1 - r if label.flip_y else r))
    return out


@dataclass(frozen=True)
class ConfigLine:
    """One of the eight configuration rays leaving a White point.

    ``cone_index`` runs 1..8 counter-clockwise starting with the ray along
    the positive x-axis; odd indices are axis rays and even ones diagonals.
    """

    anchor: Point
    cone_index: int

    @property
    def direction(self) -> tuple[int, int]:
        return _RAYS[self.cone_index - 1]

    def contains(self, z: Point) -> bool:
        dx, dy = z.x - self.anchor.x, z.y - self.anchor.y
        ux, uy = self.direction
        return dx * uy == dy * ux and dx * ux >= 0 and dy * uy >= 0


_RAYS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]


def config_lines(site: Point) -> list[ConfigLine]:
    return [ConfigLine(site, k) for k in range(1, 9)]


def square_grid_feasible(arena: Arena, n: int) -> Optional[tuple[int, int]]:
    """Grid shape ``(a, b)`` with ``a*b = n`` and square cells, if one exists.

    Square cells need ``p/a = q/b``, so ``a = sqrt(p n / q)`` and
    ``b = sqrt(q n / p)`` must both be integers.
    """
    if n < 1:
        raise DomainError("n must be positive")
    a2, b2 = arena.p * n / arena.q, arena.q * n / arena.p
    a, b = _exact_sqrt(a2), _exact_sqrt(b2)
    if a is None or b is None or a * b != n:
        return None
    return a, b


def _exact_sqrt(v: Fraction) -> Optional[int]:
    if v.denominator != 1:
        return None
    r = math.isqrt(v.numerator)
    return r if r * r == v.numerator else None
