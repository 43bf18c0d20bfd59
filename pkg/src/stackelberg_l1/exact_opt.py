"""Exact maximisation of bivariate quadratics over convex polygons.

This module is shared by the row and grid solvers.  It provides

* :class:`AreaQuadratic`, a quadratic in the local coordinates of Black;
* :class:`HalfPlane` constraints and an exact maximiser over their
  intersection;
* :class:`Surd`, numbers ``a + b*sqrt(d)`` used for table thresholds;
* :func:`parametric_envelope`, which follows the best section optimum as a
  one-parameter family of problems and returns exact breakpoints.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Union

from .core_geometry import Point, _clip, _dedupe, _area2

Scalar = Fraction


@dataclass(frozen=True)
class AreaQuadratic:
    """``xx*x^2 + yy*y^2 + xy*x*y + x*x + y*y + c``."""

    xx: Fraction = Fraction(0)
    yy: Fraction = Fraction(0)
    xy: Fraction = Fraction(0)
    x: Fraction = Fraction(0)
    y: Fraction = Fraction(0)
    c: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        for name in ("xx", "yy", "xy", "x", "y", "c"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))

    def __call__(self, x, y) -> Fraction:
        x, y = Fraction(x), Fraction(y)
        return self.xx * x * x + self.yy * y * y + self.xy * x * y + self.x * x + self.y * y + self.c

    def at(self, z: Point) -> Fraction:
        return self(z.x, z.y)

    def __add__(self, other: "AreaQuadratic") -> "AreaQuadratic":
        return AreaQuadratic(*(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "AreaQuadratic") -> "AreaQuadratic":
        return AreaQuadratic(*(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __mul__(self, k) -> "AreaQuadratic":
        return AreaQuadratic(*(a * Fraction(k) for a in self.coefficients))

    __rmul__ = __mul__

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return (self.xx, self.yy, self.xy, self.x, self.y, self.c)

    def swapped(self) -> "AreaQuadratic":
        """The same quadratic with the roles of ``x`` and ``y`` exchanged."""
        return AreaQuadratic(self.yy, self.xx, self.xy, self.y, self.x, self.c)

    def __str__(self) -> str:
        terms = []
        for coef, mono in zip(self.coefficients, ("x^2", "y^2", "xy", "x", "y", "")):
            if coef:
                terms.append(f"{coef}{'*' + mono if mono else ''}")
        return " + ".join(terms) if terms else "0"


def total(quads: Iterable[AreaQuadratic]) -> AreaQuadratic:
    out = AreaQuadratic()
    for qd in quads:
        out = out + qd
    return out


@dataclass(frozen=True)
class HalfPlane:
    """The closed half-plane ``a*x + b*y <= c`` with a short name."""

    a: Fraction
    b: Fraction
    c: Fraction
    name: str

    def value(self, z: Point) -> Fraction:
        return self.a * z.x + self.b * z.y - self.c

    def tight(self, z: Point) -> bool:
        return self.value(z) == 0


def feasible_polygon(constraints: Sequence[HalfPlane]) -> list[Point]:
    """Vertices of the intersection; the first four constraints must bound
    a rectangle ``x >= x0, x <= x1, y >= y0, y <= y1`` in that order."""
    x0, x1, y0, y1 = -constraints[0].c, constraints[1].c, -constraints[2].c, constraints[3].c
    if x1 <= x0 or y1 <= y0:
        return []
    poly: list[tuple] = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    for hp in constraints[4:]:
        poly = _clip(poly, hp.a, hp.b, -hp.c)
        if not poly:
            return []
    poly = _dedupe(poly)
    if not poly or _area2(poly) == 0:
        return []
    return [Point(x, y) for x, y in poly]


def box(x0, x1, y0, y1, names=("x_min", "x_max", "y_min", "y_max")) -> list[HalfPlane]:
    F = Fraction
    return [
        HalfPlane(F(-1), F(0), -F(x0), names[0]),
        HalfPlane(F(1), F(0), F(x1), names[1]),
        HalfPlane(F(0), F(-1), -F(y0), names[2]),
        HalfPlane(F(0), F(1), F(y1), names[3]),
    ]


@dataclass(frozen=True)
class Maximum:
    point: Point
    value: Fraction
    active: frozenset


def _inside(z: Point, constraints: Sequence[HalfPlane]) -> bool:
    return all(hp.value(z) <= 0 for hp in constraints)


def _line_critical(quad: AreaQuadratic, hp: HalfPlane) -> Optional[Point]:
    """Stationary point of ``quad`` restricted to the line ``a x + b y = c``."""
    a, b, c = hp.a, hp.b, hp.c
    if b != 0:
        # y = (c - a x)/b
        k, m = -a / b, c / b
        A = quad.xx + quad.yy * k * k + quad.xy * k
        B = 2 * quad.yy * k * m + quad.xy * m + quad.x + quad.y * k
        if A == 0:
            return None
        x = -B / (2 * A)
        return Point(x, k * x + m)
    k, m = -b / a, c / a
    A = quad.yy + quad.xx * k * k + quad.xy * k
    B = 2 * quad.xx * k * m + quad.xy * m + quad.y + quad.x * k
    if A == 0:
        return None
    y = -B / (2 * A)
    return Point(k * y + m, y)


def _stationary(quad: AreaQuadratic) -> Optional[Point]:
    det = 4 * quad.xx * quad.yy - quad.xy * quad.xy
    if det == 0:
        return None
    x = (-quad.x * 2 * quad.yy + quad.y * quad.xy) / det
    y = (-quad.y * 2 * quad.xx + quad.x * quad.xy) / det
    return Point(x, y)


def _intersection(h1: HalfPlane, h2: HalfPlane) -> Optional[Point]:
    det = h1.a * h2.b - h1.b * h2.a
    if det == 0:
        return None
    return Point((h1.c * h2.b - h1.b * h2.c) / det, (h1.a * h2.c - h1.c * h2.a) / det)


def maximize(quad: AreaQuadratic, constraints: Sequence[HalfPlane], anchor: Point = Point(0, 0)) -> Optional[Maximum]:
    """Exact maximum of ``quad`` over the polygon cut out by ``constraints``.

    The candidates are the vertices, the stationary points on each edge and
    the interior stationary point; this is exhaustive for any quadratic.
    Ties are broken towards the point nearest (L1) to ``anchor`` and then
    lexicographically.  Returns ``None`` for an empty or flat polygon.
    """
    verts = feasible_polygon(constraints)
    if not verts:
        return None
    cands = list(verts)
    for hp in constraints:
        z = _line_critical(quad, hp)
        if z is not None and _inside(z, constraints):
            cands.append(z)
    z = _stationary(quad)
    if z is not None and _inside(z, constraints):
        cands.append(z)
    best = max(
        cands,
        key=lambda w: (quad.at(w), -(abs(w.x - anchor.x) + abs(w.y - anchor.y)), -w.x, -w.y),
    )
    active = frozenset(hp.name for hp in constraints if hp.tight(best))
    return Maximum(best, quad.at(best), active)


def solve_active(quad: AreaQuadratic, constraints: Sequence[HalfPlane], active: frozenset) -> Optional[Point]:
    """Stationary point of ``quad`` with the named constraints held tight."""
    tight = [hp for hp in constraints if hp.name in active]
    if len(tight) >= 2:
        for k in range(len(tight)):
            for m in range(k + 1, len(tight)):
                z = _intersection(tight[k], tight[m])
                if z is not None:
                    return z
        return None
    if len(tight) == 1:
        return _line_critical(quad, tight[0])
    return _stationary(quad)


# ---------------------------------------------------------------------------
# Quadratic irrationals


def _squarefree(n: int) -> tuple[int, int]:
    """Write ``n = k^2 * m`` with ``m`` squarefree; return ``(k, m)``."""
    k, m, f = 1, n, 2
    while f * f <= m:
        while m % (f * f) == 0:
            m //= f * f
            k *= f
        f += 1
    return k, m


@dataclass(frozen=True)
class Surd:
    """The real number ``a + b*sqrt(d)`` with rational ``a, b`` and a
    squarefree integer ``d >= 1`` (``b == 0`` whenever ``d == 1``)."""

    a: Fraction
    b: Fraction = Fraction(0)
    d: int = 1

    @staticmethod
    def make(a, b=0, d=1) -> "Surd":
        a, b, d = Fraction(a), Fraction(b), Fraction(d)
        if d < 0:
            raise ValueError("negative radicand")
        if b == 0 or d == 0:
            return Surd(a)
        # sqrt(num/den) = sqrt(num*den)/den
        k, m = _squarefree(d.numerator * d.denominator)
        b = b * k / d.denominator
        if m == 1:
            return Surd(a + b)
        return Surd(a, b, m)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * math.sqrt(self.d)

    def _bounds(self, bits: int) -> tuple[Fraction, Fraction]:
        if self.b == 0:
            return self.a, self.a
        scale = 1 << bits
        r = math.isqrt(self.d * scale * scale)
        lo, hi = Fraction(r, scale), Fraction(r + 1, scale)
        if self.b > 0:
            return self.a + self.b * lo, self.a + self.b * hi
        return self.a + self.b * hi, self.a + self.b * lo

    def compare(self, other: Union["Surd", Fraction, int]) -> int:
        other = other if isinstance(other, Surd) else Surd(Fraction(other))
        if self == other:
            return 0
        # Fast path: doubles are far more accurate than this margin for the
        # small surds that occur here; close calls fall through to exact work.
        fa, fb = float(self), float(other)
        if abs(fa - fb) > 1e-9 * max(1.0, abs(fa), abs(fb)):
            return 1 if fa > fb else -1
        if self.d == other.d or self.b == 0 or other.b == 0:
            d = self.d if self.b != 0 else other.d
            da, db = self.a - other.a, self.b - other.b
            # sign of da + db*sqrt(d)
            if db == 0:
                return (da > 0) - (da < 0)
            if da == 0:
                return 1 if db > 0 else -1
            if (da > 0) == (db > 0):
                return 1 if da > 0 else -1
            lhs, rhs = da * da, db * db * d
            if lhs == rhs:
                return 0
            bigger_a = lhs > rhs
            return (1 if da > 0 else -1) if bigger_a else (1 if db > 0 else -1)
        bits = 64
        while True:
            l1, h1 = self._bounds(bits)
            l2, h2 = other._bounds(bits)
            if h1 < l2:
                return -1
            if h2 < l1:
                return 1
            bits *= 2

    def __lt__(self, other) -> bool:
        return self.compare(other) < 0

    def __le__(self, other) -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other) -> bool:
        return self.compare(other) > 0

    def __ge__(self, other) -> bool:
        return self.compare(other) >= 0

    def scaled(self, k) -> "Surd":
        k = Fraction(k)
        return Surd(self.a * k, self.b * k, self.d) if self.b else Surd(self.a * k)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        sign = "+" if self.b > 0 else "-"
        mag = abs(self.b)
        rad = f"sqrt({self.d})" if mag == 1 else f"{mag}*sqrt({self.d})"
        if self.a == 0:
            return ("-" if self.b < 0 else "") + rad
        return f"{self.a} {sign} {rad}"


def rational_between(lo: Union[Surd, Fraction, None], hi: Union[Surd, Fraction, None]) -> Fraction:
    """A simple rational strictly between two bounds (``None`` = unbounded)."""
    if lo is None and hi is None:
        return Fraction(0)
    if hi is None:
        return Fraction(math.floor(float(lo))) + 1
    if lo is None:
        return Fraction(math.ceil(float(hi))) - 1
    lo_s = lo if isinstance(lo, Surd) else Surd(Fraction(lo))
    hi_s = hi if isinstance(hi, Surd) else Surd(Fraction(hi))
    den = 2
    while True:
        mid = Fraction(round((float(lo_s) + float(hi_s)) / 2 * den), den)
        if lo_s.compare(mid) < 0 and hi_s.compare(mid) > 0:
            return mid
        den *= 2
        if den > 1 << 200:
            raise ArithmeticError("bounds do not separate")


@dataclass(frozen=True)
class Poly2:
    """Univariate polynomial ``c0 + c1*t + c2*t^2`` with rational coefficients."""

    c0: Fraction
    c1: Fraction = Fraction(0)
    c2: Fraction = Fraction(0)

    @staticmethod
    def interpolate(values: Sequence[Fraction]) -> "Poly2":
        """Through ``(0, v0), (1, v1), (2, v2)``."""
        v0, v1, v2 = (Fraction(v) for v in values)
        c2 = (v2 - 2 * v1 + v0) / 2
        c1 = v1 - v0 - c2
        return Poly2(v0, c1, c2)

    def __call__(self, t) -> Fraction:
        t = Fraction(t)
        return self.c0 + self.c1 * t + self.c2 * t * t

    def __sub__(self, other: "Poly2") -> "Poly2":
        return Poly2(self.c0 - other.c0, self.c1 - other.c1, self.c2 - other.c2)

    def is_zero(self) -> bool:
        return self.c0 == 0 and self.c1 == 0 and self.c2 == 0

    def roots(self) -> list[Surd]:
        c0, c1, c2 = self.c0, self.c1, self.c2
        if c2 == 0:
            return [] if c1 == 0 else [Surd(-c0 / c1)]
        disc = c1 * c1 - 4 * c2 * c0
        if disc < 0:
            return []
        if disc == 0:
            return [Surd(-c1 / (2 * c2))]
        r1 = Surd.make(-c1 / (2 * c2), Fraction(1) / (2 * c2), disc)
        r2 = Surd.make(-c1 / (2 * c2), Fraction(-1) / (2 * c2), disc)
        return sorted([r1, r2], key=float)

    def value_at(self, s: Surd) -> float:
        return float(self.c0) + float(self.c1) * float(s) + float(self.c2) * float(s) ** 2


# ---------------------------------------------------------------------------
# One-parameter envelopes


Problem = Callable[[Fraction], tuple[AreaQuadratic, list[HalfPlane]]]


@dataclass(frozen=True)
class Branch:
    """One regime of a section optimum: fixed active set, affine location,
    quadratic value, valid for ``t`` in ``[lo, hi]``."""

    key: object
    active: frozenset
    loc_x: Poly2
    loc_y: Poly2
    value: Poly2
    lo: Union[Surd, None]
    hi: Union[Surd, None]

    def location(self, t) -> Point:
        return Point(self.loc_x(t), self.loc_y(t))


def _branch_formula(problem: Problem, active: frozenset):
    pts = []
    for t in (0, 1, 2, 3):
        quad, cons = problem(Fraction(t))
        z = solve_active(quad, cons, active)
        if z is None:
            return None
        pts.append((z, quad.at(z)))
    lx = Poly2.interpolate([p.x for p, _ in pts[:3]])
    ly = Poly2.interpolate([p.y for p, _ in pts[:3]])
    val = Poly2.interpolate([v for _, v in pts[:3]])
    if lx(3) != pts[3][0].x or ly(3) != pts[3][0].y or val(3) != pts[3][1]:
        raise ArithmeticError("branch is not polynomial in the parameter")
    return lx, ly, val


def section_branches(key, problem: Problem, t_lo: Fraction, t_hi: Fraction, step: Fraction,
                     anchor: Union[Point, Callable[[Fraction], Point]] = Point(0, 0)) -> list[Branch]:
    """Follow the optimum of one section for ``t`` in ``(t_lo, t_hi]``.

    The first branch starts at ``t_lo`` (callers pass the value at which the
    section appears) and the last one is left open-ended.  ``anchor`` is the
    tie-break target of :func:`maximize`, optionally as a function of ``t``.
    """
    anchor_at = anchor if callable(anchor) else (lambda _t: anchor)
    samples = []
    t = t_lo + step / 2
    while t <= t_hi:
        quad, cons = problem(t)
        m = maximize(quad, cons, anchor_at(t))
        if m is not None:
            samples.append((t, m.active))
        t += step
    runs: list[tuple[frozenset, Fraction, Fraction]] = []
    for t, act in samples:
        if runs and runs[-1][0] == act:
            runs[-1] = (act, runs[-1][1], t)
        else:
            runs.append((act, t, t))
    branches: list[Branch] = []
    prev, prev_last = None, t_lo
    for act, first, last in runs:
        formula = _branch_formula(problem, act)
        if formula is None:
            raise ArithmeticError(f"no closed form for active set {sorted(act)}")
        lx, ly, val = formula
        lo: Union[Surd, None] = Surd(Fraction(t_lo))
        if prev is not None:
            diff = prev.value - val
            roots = [r for r in diff.roots() if Surd(prev_last) <= r <= Surd(first)] if not diff.is_zero() else []
            if diff.is_zero():
                lo = Surd(first)
            elif not roots:
                raise ArithmeticError("missed a branch change; refine the step")
            else:
                lo = roots[0]
            branches[-1] = Branch(prev.key, prev.active, prev.loc_x, prev.loc_y, prev.value, prev.lo, lo)
        br = Branch(key, act, lx, ly, val, lo, None)
        branches.append(br)
        prev, prev_last = br, last
    return branches


@dataclass(frozen=True)
class EnvelopePiece:
    branch: Branch
    lo: Union[Surd, None]
    hi: Union[Surd, None]


def _in_range(br: Branch, t: Fraction) -> bool:
    return (br.lo is None or br.lo.compare(t) <= 0) and (br.hi is None or br.hi.compare(t) >= 0)


def parametric_envelope(branches: Sequence[Branch], t_lo: Fraction, t_hi: Fraction,
                        priority: Callable[[Branch], object]) -> list[EnvelopePiece]:
    """Upper envelope of piecewise-quadratic branch values on ``[t_lo, t_hi]``.

    ``priority`` orders branches that tie identically over an interval
    (smaller is preferred).  The last piece is open-ended when the same
    branch wins at ``t_hi``.
    """
    cuts: list[Surd] = [Surd(Fraction(t_lo)), Surd(Fraction(t_hi))]
    for br in branches:
        for b in (br.lo, br.hi):
            if b is not None and Surd(Fraction(t_lo)) < b < Surd(Fraction(t_hi)):
                cuts.append(b)
    def overlaps(u: Branch, v: Branch) -> bool:
        return (u.hi is None or v.lo is None or u.hi.compare(v.lo) >= 0) and \
            (v.hi is None or u.lo is None or v.hi.compare(u.lo) >= 0)

    for k in range(len(branches)):
        for m in range(k + 1, len(branches)):
            if not overlaps(branches[k], branches[m]):
                continue
            diff = branches[k].value - branches[m].value
            if diff.is_zero():
                continue
            for r in diff.roots():
                if Surd(Fraction(t_lo)) < r < Surd(Fraction(t_hi)):
                    cuts.append(r)
    uniq: list[Surd] = []
    for c in sorted(cuts, key=float):
        if not uniq or uniq[-1].compare(c) != 0:
            uniq.append(c)
    uniq = sorted(uniq, key=functools.cmp_to_key(lambda u, v: u.compare(v)))
    pieces: list[EnvelopePiece] = []
    for lo, hi in zip(uniq, uniq[1:]):
        mid = rational_between(lo, hi)
        live = [br for br in branches if _in_range(br, mid)]
        if not live:
            continue
        best = max(live, key=lambda br: (br.value(mid), _neg(priority(br))))
        if pieces and pieces[-1].branch == best:
            pieces[-1] = EnvelopePiece(best, pieces[-1].lo, hi)
        else:
            pieces.append(EnvelopePiece(best, lo, hi))
    return pieces


class _neg:
    """Wrap a key so that ``max`` prefers the smallest original key."""

    def __init__(self, key) -> None:
        self.key = key

    def __lt__(self, other: "_neg") -> bool:
        return other.key < self.key

    def __eq__(self, other) -> bool:
        return self.key == other.key
