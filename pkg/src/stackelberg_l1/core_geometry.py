"""Exact L1 geometry in a rectangular arena.

Every coordinate is a :class:`fractions.Fraction`.  Voronoi cells are built
by refining the arena along the vertical and horizontal lines through all
sites.  Inside each resulting rectangle the difference of two L1 distances
is an affine function, so a cell restricted to that rectangle is an
intersection of half-planes and can be clipped exactly.

Ties between two sites (the two-dimensional tie regions that appear when
``|dx| == |dy|``) are resolved lexicographically: first by L1 distance,
then by Euclidean distance.  Inside a tie region the Euclidean comparison
splits the plane along the diagonal through the midpoint of the pair, which
is the same as extending the middle diagonal of the bisector across both
tie squares.

For speed the cell construction works on integers: all inputs are scaled by
``4 * lcm(denominators)`` which makes every vertex produced by the
clipping integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Optional, Sequence, Union

from .errors import CoincidentSites, DomainError, GeometryError, NonSimplePolygon

ExactScalar = Fraction
Number = Union[int, Fraction, str, float]


def as_exact(value: Number) -> Fraction:
    """Convert ``value`` to a :class:`Fraction`.

    Strings may be ``"num/den"`` or a decimal literal.  Floats are read
    through their shortest decimal representation so that ``0.1`` becomes
    ``1/10`` rather than the nearest binary fraction.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"non-finite coordinate {value!r}")
        return Fraction(repr(value))
    if isinstance(value, Rational):
        return Fraction(value.numerator, value.denominator)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"cannot parse rational {value!r}") from exc
    raise TypeError(f"unsupported scalar type {type(value).__name__}")


@dataclass(frozen=True, order=True)
class Point:
    """A point with exact rational coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", as_exact(self.x))
        object.__setattr__(self, "y", as_exact(self.y))

    def __add__(self, other: "Point") -> "Point":
        return Point(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point") -> "Point":
        return Point(self.x - other.x, self.y - other.y)

    def as_float(self) -> tuple[float, float]:
        return float(self.x), float(self.y)


@dataclass(frozen=True)
class Arena:
    """The axis-aligned rectangle ``[0, p] x [0, q]``."""

    p: Fraction
    q: Fraction

    def __post_init__(self) -> None:
        p, q = as_exact(self.p), as_exact(self.q)
        if p <= 0 or q <= 0:
            raise DomainError("arena sides must be positive")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def area(self) -> Fraction:
        return self.p * self.q

    def contains(self, z: Point) -> bool:
        return 0 <= z.x <= self.p and 0 <= z.y <= self.q

    def strictly_contains(self, z: Point) -> bool:
        return 0 < z.x < self.p and 0 < z.y < self.q


@dataclass(frozen=True)
class Row:
    """``n`` White points equally spaced along the horizontal midline."""

    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError("a row needs at least one point")

    def sites(self, arena: Arena) -> list[Point]:
        return row_sites(arena, self.n)


@dataclass(frozen=True)
class Grid:
    """An ``a`` by ``b`` grid of White points at the centres of equal cells."""

    a: int
    b: int

    def __post_init__(self) -> None:
        if self.a < 2 or self.b < 2:
            raise DomainError("a grid needs a, b >= 2; a single line of points is a Row")

    def sites(self, arena: Arena) -> list[Point]:
        return grid_sites(arena, self.a, self.b)


WhiteArrangement = Union[Row, Grid]


def row_sites(arena: Arena, n: int) -> list[Point]:
    """Sites ``w_i = ((2i-1)p/2n, q/2)`` for ``i = 1..n``."""
    if n < 1:
        raise DomainError("n must be positive")
    return [Point((2 * i - 1) * arena.p / (2 * n), arena.q / 2) for i in range(1, n + 1)]


def grid_site(arena: Arena, a: int, b: int, col: int, row: int) -> Point:
    """Centre of grid cell ``(col, row)``, both 1-based from the bottom left."""
    return Point((2 * col - 1) * arena.p / (2 * a), (2 * row - 1) * arena.q / (2 * b))


def grid_sites(arena: Arena, a: int, b: int) -> list[Point]:
    """All grid sites, column-major: index ``(col-1)*b + (row-1)``."""
    if a < 1 or b < 1:
        raise DomainError("grid dimensions must be positive")
    return [grid_site(arena, a, b, c, r) for c in range(1, a + 1) for r in range(1, b + 1)]


def l1_distance(s: Point, t: Point) -> Fraction:
    """Manhattan distance ``|sx - tx| + |sy - ty|``."""
    return abs(s.x - t.x) + abs(s.y - t.y)


def lex_compare(z: Point, s: Point, t: Point) -> int:
    """Return -1 if ``s`` claims ``z`` over ``t``, +1 if ``t`` does, 0 on a true tie.

    Claims are decided by L1 distance and, when that ties, by squared
    Euclidean distance.
    """
    d = l1_distance(z, s) - l1_distance(z, t)
    if d == 0:
        d = (z.x - s.x) ** 2 + (z.y - s.y) ** 2 - (z.x - t.x) ** 2 - (z.y - t.y) ** 2
    return (d > 0) - (d < 0)


# ---------------------------------------------------------------------------
# Bisectors


@dataclass(frozen=True)
class Bisector:
    """The L1 bisector between ``favored`` and ``other``.

    ``breakpoints`` are the finite vertices of the polyline.  The polyline
    continues to infinity from the first breakpoint along ``start_ray`` and
    from the last one along ``end_ray`` (unit octilinear directions).

    For a degenerate pair (``|dx| == |dy|``) the equidistant set also
    contains two closed quadrants.  They are listed in ``tie_regions`` as
    ``(corner, (sx, sy))`` meaning ``{z : sx*(z.x-corner.x) >= 0 and
    sy*(z.y-corner.y) >= 0}``; ``breakpoints`` and the two rays then
    describe the diagonal that resolves the tie.
    """

    favored: Point
    other: Point
    kind: str
    breakpoints: tuple[Point, ...]
    start_ray: tuple[int, int]
    end_ray: tuple[int, int]
    tie_regions: tuple[tuple[Point, tuple[int, int]], ...] = ()

    @property
    def is_degenerate(self) -> bool:
        return self.kind == "degenerate"

    def side(self, z: Point) -> int:
        """-1 if ``favored`` claims ``z``, +1 if ``other`` does, 0 on the curve."""
        return lex_compare(z, self.favored, self.other)


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def bisector(s: Point, t: Point) -> Bisector:
    """Exact L1 bisector of two distinct sites."""
    if s == t:
        raise CoincidentSites(f"sites coincide at {s}")
    dx, dy = t.x - s.x, t.y - s.y
    m = Point((s.x + t.x) / 2, (s.y + t.y) / 2)
    sx, sy = _sign(dx), _sign(dy)
    if abs(dx) == abs(dy):
        # Diagonal through the two free corners; extended both ways.
        a, b = Point(s.x, t.y), Point(t.x, s.y)
        direction = (sx, -sy)
        ties = ((a, (-sx, sy)), (b, (sx, -sy)))
        return Bisector(s, t, "degenerate", (a, b), (-direction[0], -direction[1]), direction, ties)
    if abs(dx) > abs(dy):
        if dy == 0:
            return Bisector(s, t, "generic", (m,), (0, -1), (0, 1))
        # Vertical rays joined by a diagonal between y = s.y and y = t.y.
        lo, hi = (s, t) if s.y < t.y else (t, s)
        k = -sx * sy  # slope of the diagonal
        p_lo = Point(m.x + (lo.y - m.y) * k, lo.y)
        p_hi = Point(m.x + (hi.y - m.y) * k, hi.y)
        return Bisector(s, t, "generic", (p_lo, p_hi), (0, -1), (0, 1))
    if dx == 0:
        return Bisector(s, t, "generic", (m,), (-1, 0), (1, 0))
    lo, hi = (s, t) if s.x < t.x else (t, s)
    k = -sx * sy
    p_lo = Point(lo.x, m.y + k * (lo.x - m.x))
    p_hi = Point(hi.x, m.y + k * (hi.x - m.x))
    return Bisector(s, t, "generic", (p_lo, p_hi), (-1, 0), (1, 0))


# ---------------------------------------------------------------------------
# Exact convex clipping on integer or rational coordinates


def _div(num, den):
    """Exact quotient; stays an int when the division is exact."""
    if isinstance(num, int) and isinstance(den, int):
        q, r = divmod(num, den)
        if r == 0:
            return q
        return Fraction(num, den)
    return num / den


def _clip(poly: list[tuple], a, b, c) -> list[tuple]:
    """Keep the part of convex ``poly`` where ``a*x + b*y + c <= 0``."""
    vals = [a * x + b * y + c for x, y in poly]
    if all(v <= 0 for v in vals):
        return poly
    if all(v >= 0 for v in vals):
        return []
    out: list[tuple] = []
    k = len(poly)
    for idx in range(k):
        p0, v0 = poly[idx], vals[idx]
        p1, v1 = poly[(idx + 1) % k], vals[(idx + 1) % k]
        if v0 <= 0:
            out.append(p0)
        if (v0 < 0 < v1) or (v1 < 0 < v0):
            den = v0 - v1
            out.append((p0[0] + _div((p1[0] - p0[0]) * v0, den), p0[1] + _div((p1[1] - p0[1]) * v0, den)))
    return _dedupe(out)


def _dedupe(poly: list[tuple]) -> list[tuple]:
    out: list[tuple] = []
    for pt in poly:
        if not out or out[-1] != pt:
            out.append(pt)
    if len(out) > 1 and out[0] == out[-1]:
        out.pop()
    return out if len(out) >= 3 else []


def _area2(poly: Sequence[tuple]):
    """Twice the signed shoelace area."""
    s = 0
    k = len(poly)
    for idx in range(k):
        x0, y0 = poly[idx]
        x1, y1 = poly[(idx + 1) % k]
        s += x0 * y1 - x1 * y0
    return s


def _clip_rect(poly: list[tuple], x0, x1, y0, y1) -> list[tuple]:
    for a, b, c in ((-1, 0, x0), (1, 0, -x1), (0, -1, y0), (0, 1, -y1)):
        poly = _clip(poly, a, b, c)
        if not poly:
            return []
    return poly


def _pair_constraint(sx, sy, tx, ty, mx2, my2, rank=0):
    """Half-plane for ``d(z,s) <= d(z,t)`` inside the rectangle whose doubled
    centre is ``(mx2, my2)``.  Returns ``(a, b, c, degenerate)``.

    ``rank`` decides two-dimensional L1 ties: positive means ``s`` takes the
    whole tie region, negative means ``t`` does, zero splits it by Euclidean
    distance."""
    ssx = _sign(mx2 - 2 * sx)
    ssy = _sign(my2 - 2 * sy)
    stx = _sign(mx2 - 2 * tx)
    sty = _sign(my2 - 2 * ty)
    a = ssx - stx
    b = ssy - sty
    c = -ssx * sx - ssy * sy + stx * tx + sty * ty
    if a == 0 and b == 0 and c == 0:
        # Two-dimensional L1 tie.
        if rank:
            return 0, 0, (-1 if rank > 0 else 1), True
        return 2 * (tx - sx), 2 * (ty - sy), sx * sx + sy * sy - tx * tx - ty * ty, True
    return a, b, c, False


def _common_scale(values: Iterable[Fraction]) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    return 4 * den


@dataclass
class CellPieces:
    """A Voronoi cell stored as convex pieces on a scaled integer lattice."""

    pieces: list[list[tuple]]
    scale: int
    degenerate_used: bool = False

    @property
    def area(self) -> Fraction:
        return Fraction(sum(_area2(pc) for pc in self.pieces), 2 * self.scale * self.scale)

    def area_within(self, x0: Fraction, x1: Fraction, y0: Fraction, y1: Fraction) -> Fraction:
        """Area of the cell inside the rectangle ``[x0,x1] x [y0,y1]``."""
        s = self.scale
        bounds = [as_exact(v) * s for v in (x0, x1, y0, y1)]
        bounds = [int(v) if v.denominator == 1 else v for v in bounds]
        total = 0
        for pc in self.pieces:
            clipped = _clip_rect(pc, *bounds)
            if clipped:
                total += _area2(clipped)
        return Fraction(total) / (2 * s * s)

    def loops(self) -> list[list[Point]]:
        """Boundary loops of the cell (one per connected component)."""
        return [[Point(Fraction(x) / self.scale, Fraction(y) / self.scale) for x, y in loop]
                for loop in _merge_pieces(self.pieces)]

    def polygon(self) -> "OctoPolygon":
        loops = _merge_pieces(self.pieces)
        if len(loops) != 1:
            raise GeometryError(f"cell boundary has {len(loops)} loops")
        return OctoPolygon(tuple(Point(Fraction(x) / self.scale, Fraction(y) / self.scale) for x, y in loops[0]))


def cell_pieces(arena: Arena, sites: Sequence[Point], index: int,
                priority: Optional[Sequence[int]] = None) -> CellPieces:
    """Convex decomposition of the Voronoi cell of ``sites[index]``.

    ``priority`` optionally ranks the sites: on a two-dimensional L1 tie the
    site with the higher priority takes the region.  Equal priorities fall
    back to the Euclidean split.
    """
    if not 0 <= index < len(sites):
        raise DomainError("site index out of range")
    seen = set()
    for st in sites:
        if st in seen:
            raise CoincidentSites(f"sites coincide at {st}")
        seen.add(st)
    scale = _common_scale([arena.p, arena.q] + [v for st in sites for v in (st.x, st.y)])
    P, Q = int(arena.p * scale), int(arena.q * scale)
    pts = [(int(st.x * scale), int(st.y * scale)) for st in sites]
    sx, sy = pts[index]
    prio = list(priority) if priority is not None else [0] * len(sites)
    if len(prio) != len(sites):
        raise DomainError("priority must have one entry per site")
    rank_of = {pt: prio[index] - prio[k] for k, pt in enumerate(pts)}
    others = [pt for k, pt in enumerate(pts) if k != index]
    others.sort(key=lambda t: abs(t[0] - sx) + abs(t[1] - sy))
    xs = sorted({0, P} | {x for x, _ in pts if 0 < x < P})
    ys = sorted({0, Q} | {y for _, y in pts if 0 < y < Q})
    pieces: list[list[tuple]] = []
    degenerate = False
    for xa, xb in zip(xs, xs[1:]):
        mx2 = xa + xb
        for ya, yb in zip(ys, ys[1:]):
            my2 = ya + yb
            # Cheap test with the site nearest to the rectangle centre.
            near = min(others, key=lambda t: abs(2 * t[0] - mx2) + abs(2 * t[1] - my2), default=None)
            order = others if near is None else [near] + others
            poly: list[tuple] = [(xa, ya), (xb, ya), (xb, yb), (xa, yb)]
            used_tie = False
            for tx, ty in order:
                a, b, c, deg = _pair_constraint(sx, sy, tx, ty, mx2, my2, rank_of[(tx, ty)])
                poly = _clip(poly, a, b, c)
                if not poly:
                    break
                used_tie = used_tie or deg
            if poly and _area2(poly) > 0:
                pieces.append(poly)
                degenerate = degenerate or used_tie
    return CellPieces(pieces, scale, degenerate)


def cell_area(arena: Arena, sites: Sequence[Point], index: int,
              priority: Optional[Sequence[int]] = None) -> Fraction:
    """Exact area of the Voronoi cell of ``sites[index]``."""
    return cell_pieces(arena, sites, index, priority).area


def cell_of_site(arena: Arena, sites: Sequence[Point], index: int) -> "OctoPolygon":
    """Exact Voronoi cell of ``sites[index]`` as a single canonical polygon."""
    return cell_pieces(arena, sites, index).polygon()


# ---------------------------------------------------------------------------
# Polygons

_DIRS = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)]


def _direction_index(dx, dy) -> int:
    if dx == 0 and dy == 0:
        raise GeometryError("zero-length edge")
    if dx != 0 and dy != 0 and abs(dx) != abs(dy):
        raise GeometryError("edge is not octilinear")
    return _DIRS.index((_sign(dx), _sign(dy)))


def _canonical_loop(loop: list[tuple]) -> list[tuple]:
    """Drop duplicate and collinear vertices, orient CCW, rotate to the
    lexicographically smallest vertex."""
    pts = [pt for k, pt in enumerate(loop) if pt != loop[k - 1]]
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        k = len(pts)
        for idx in range(k):
            a, b, c = pts[idx - 1], pts[idx], pts[(idx + 1) % k]
            cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
            if cross == 0:
                del pts[idx]
                changed = True
                break
    if len(pts) < 3:
        raise GeometryError("degenerate polygon")
    if _area2(pts) < 0:
        pts.reverse()
    start = min(range(len(pts)), key=lambda k: pts[k])
    return pts[start:] + pts[:start]


@dataclass(frozen=True)
class OctoPolygon:
    """A simple polygon whose edges are horizontal, vertical or at 45 degrees.

    The vertex list is normalised on construction (counter-clockwise, no
    collinear vertices, starting at the lexicographically smallest vertex)
    so structural equality is geometric equality.
    """

    vertices: tuple[Point, ...]

    def __post_init__(self) -> None:
        pts = [(as_exact(v.x), as_exact(v.y)) for v in self.vertices]
        canon = _canonical_loop(pts)
        object.__setattr__(self, "vertices", tuple(Point(x, y) for x, y in canon))

    @classmethod
    def rectangle(cls, x0: Number, y0: Number, x1: Number, y1: Number) -> "OctoPolygon":
        return cls((Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)))

    @property
    def area(self) -> Fraction:
        return polygon_area(self)

    def is_octilinear(self) -> bool:
        pts = self.vertices
        try:
            for k in range(len(pts)):
                _direction_index(pts[(k + 1) % len(pts)].x - pts[k].x, pts[(k + 1) % len(pts)].y - pts[k].y)
        except GeometryError:
            return False
        return True

    def bounds(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)


def _segments_cross(p1, p2, p3, p4) -> bool:
    def orient(a, b, c):
        return _sign((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    def on_seg(a, b, c):
        return min(a[0], b[0]) <= c[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])

    o1, o2, o3, o4 = orient(p1, p2, p3), orient(p1, p2, p4), orient(p3, p4, p1), orient(p3, p4, p2)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    return (
        (o1 == 0 and on_seg(p1, p2, p3))
        or (o2 == 0 and on_seg(p1, p2, p4))
        or (o3 == 0 and on_seg(p3, p4, p1))
        or (o4 == 0 and on_seg(p3, p4, p2))
    )


def is_simple(vertices: Sequence[Point]) -> bool:
    pts = [(v.x, v.y) for v in vertices]
    k = len(pts)
    if k < 3 or len(set(pts)) != k:
        return False
    edges = [(pts[i], pts[(i + 1) % k]) for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            if j == i + 1 or (i == 0 and j == k - 1):
                continue
            if _segments_cross(*edges[i], *edges[j]):
                return False
    return True


def polygon_area(poly: Union[OctoPolygon, Sequence[Point]]) -> Fraction:
    """Exact area of a simple polygon (shoelace formula)."""
    verts = poly.vertices if isinstance(poly, OctoPolygon) else tuple(poly)
    if not verts:
        return Fraction(0)
    if not is_simple(verts):
        raise NonSimplePolygon("polygon is not simple")
    return abs(Fraction(_area2([(v.x, v.y) for v in verts]))) / 2


def _merge_pieces(pieces: Sequence[Sequence[tuple]]) -> list[list[tuple]]:
    """Boundary loops of the union of interior-disjoint convex CCW pieces."""
    lines: dict[tuple, list[tuple]] = {}
    for pc in pieces:
        k = len(pc)
        for idx in range(k):
            p0, p1 = pc[idx], pc[(idx + 1) % k]
            d = _DIRS[_direction_index(p1[0] - p0[0], p1[1] - p0[1])]
            ux, uy = d if (d[0] > 0 or (d[0] == 0 and d[1] > 0)) else (-d[0], -d[1])
            sign = 1 if (ux, uy) == d else -1
            off = ux * p0[1] - uy * p0[0]
            s0 = ux * p0[0] + uy * p0[1]
            s1 = ux * p1[0] + uy * p1[1]
            lines.setdefault((ux, uy, off), []).append((min(s0, s1), max(s0, s1), sign))
    edges: list[tuple[tuple, tuple]] = []
    for (ux, uy, off), spans in lines.items():
        cuts = sorted({v for lo, hi, _ in spans for v in (lo, hi)})
        norm = ux * ux + uy * uy

        def at(s):
            return (_div(ux * s - uy * off, norm), _div(uy * s + ux * off, norm))

        for lo, hi in zip(cuts, cuts[1:]):
            net = sum(sg for a, b, sg in spans if a <= lo and hi <= b)
            if net > 0:
                edges.append((at(lo), at(hi)))
            elif net < 0:
                edges.append((at(hi), at(lo)))
    outgoing: dict[tuple, list[int]] = {}
    for k, (a, _) in enumerate(edges):
        outgoing.setdefault(a, []).append(k)
    used = [False] * len(edges)
    loops: list[list[tuple]] = []
    for start in sorted(range(len(edges)), key=lambda k: edges[k][0]):
        if used[start]:
            continue
        loop = []
        cur = start
        while not used[cur]:
            used[cur] = True
            a, b = edges[cur]
            loop.append(a)
            din = _direction_index(b[0] - a[0], b[1] - a[1])
            cands = [k for k in outgoing.get(b, []) if not used[k]]
            if not cands:
                break

            def turn(k):
                c, d = edges[k]
                t = (_direction_index(d[0] - c[0], d[1] - c[1]) - din) % 8
                return t - 8 if t > 4 else t

            cur = max(cands, key=turn)
        loops.append(_canonical_loop(loop))
    return loops


def _trapezoids(poly: OctoPolygon) -> list[list[tuple]]:
    """Split a simple polygon into convex pieces along horizontal lines
    through its vertices."""
    pts = [(v.x, v.y) for v in poly.vertices]
    k = len(pts)
    ys = sorted({y for _, y in pts})
    out = []
    for y0, y1 in zip(ys, ys[1:]):
        ym = (y0 + y1) / 2
        crossings = []
        for idx in range(k):
            (ax, ay), (bx, by) = pts[idx], pts[(idx + 1) % k]
            if min(ay, by) <= y0 and max(ay, by) >= y1 and ay != by:

                def x_at(y, ax=ax, ay=ay, bx=bx, by=by):
                    return ax + (bx - ax) * (y - ay) / (by - ay)

                crossings.append((x_at(ym), x_at(y0), x_at(y1)))
        crossings.sort()
        for left, right in zip(crossings[::2], crossings[1::2]):
            trap = _dedupe([(left[1], y0), (right[1], y0), (right[2], y1), (left[2], y1)])
            if trap:
                out.append(trap)
    return out


def dominance_clip(region: OctoPolygon, favored: Point, other: Point) -> OctoPolygon:
    """Part of ``region`` that ``favored`` claims over ``other``.

    Raises :class:`GeometryError` if the result is empty or disconnected.
    """
    if favored == other:
        raise CoincidentSites(f"sites coincide at {favored}")
    sx, sy, tx, ty = favored.x, favored.y, other.x, other.y
    xcuts = sorted({sx, tx})
    ycuts = sorted({sy, ty})
    result = []
    for trap in _trapezoids(region):
        parts = [trap]
        for xc in xcuts:
            parts = [pc for part in parts for pc in (_clip(part, 1, 0, -xc), _clip(part, -1, 0, xc)) if pc]
        for yc in ycuts:
            parts = [pc for part in parts for pc in (_clip(part, 0, 1, -yc), _clip(part, 0, -1, yc)) if pc]
        for part in parts:
            cx = sum(x for x, _ in part) / len(part)
            cy = sum(y for _, y in part) / len(part)
            a, b, c, _ = _pair_constraint(sx, sy, tx, ty, 2 * cx, 2 * cy)
            kept = _clip(part, a, b, c)
            if kept and _area2(kept) != 0:
                result.append(kept)
    if not result:
        raise GeometryError("favored site claims no part of the region")
    loops = _merge_pieces(result)
    if len(loops) != 1:
        raise GeometryError(f"dominance region has {len(loops)} components")
    return OctoPolygon(tuple(Point(x, y) for x, y in loops[0]))
