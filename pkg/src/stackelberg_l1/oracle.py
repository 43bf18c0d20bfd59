"""Independent numerical checks built straight from the nearest-site rule.

Nothing here uses the section partition or the closed forms.

* :func:`sampled_area` classifies the centres of a uniform lattice by their
  nearest site (exact integer arithmetic after scaling).
* :func:`grid_search_best` evaluates Black's exact stolen area at every
  lattice point with a vectorised kernel.  It relies only on the fact that
  a White row or grid has rectangular Voronoi cells, so Black's gain inside
  each White rectangle is the area of ``{z : d(z,b) < d(z,w)}`` there.
* :func:`verify_suite` runs randomised invariant batteries and returns a
  JSON-ready report.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .core_geometry import Arena, Grid, Point, Row, WhiteArrangement, as_exact, cell_area, grid_site, row_sites
from .errors import CoincidentSites, DomainError, OnBoundary, StackelbergError

__all__ = [
    "SampleSpec",
    "SampledArea",
    "SearchResult",
    "grid_search_best",
    "sampled_area",
    "stolen_area_lattice",
    "verify_suite",
]

TIE_RULES = ("LEX", "ToWhite", "ToBlack", "Exclude")


@dataclass(frozen=True)
class SampleSpec:
    """Lattice settings.

    ``tie_rule`` decides lattice cells whose nearest L1 distance is shared:
    ``LEX`` breaks by Euclidean distance and then index (the library's own
    convention), ``ToWhite``/``ToBlack`` favour a colour, ``Exclude`` drops
    them.  ``rng_seed`` only feeds jittered re-runs.
    """

    resolution: int = 400
    rng_seed: int = 0
    tie_rule: str = "LEX"

    def __post_init__(self) -> None:
        if self.resolution < 2:
            raise DomainError("resolution must be at least 2")
        if self.tie_rule not in TIE_RULES:
            raise DomainError(f"tie_rule must be one of {TIE_RULES}")


@dataclass(frozen=True)
class SampledArea:
    value: float
    error_bound: float
    ties: int
    lattice_cells: int


def _lcm_den(values) -> int:
    den = 1
    for v in values:
        den = math.lcm(den, Fraction(v).denominator)
    return den


def _int_array(values, fits: bool):
    return np.array(values, dtype=np.int64 if fits else object)


def sampled_area(arena: Arena, sites: Sequence[Point], index: int, spec: SampleSpec = SampleSpec(),
                 black: Optional[Sequence[bool]] = None, jitter: bool = False) -> SampledArea:
    """Area of ``sites[index]``'s cell estimated on a ``resolution^2`` lattice.

    ``black`` marks Black sites for the colour tie rules.  With ``jitter``
    every lattice centre is shifted by one common random offset drawn from
    ``spec.rng_seed``.
    """
    sites = list(sites)
    if len(set(sites)) != len(sites):
        raise CoincidentSites("sites must be distinct")
    if not 0 <= index < len(sites):
        raise DomainError("site index out of range")
    res = spec.resolution
    off_x = off_y = Fraction(1, 2)
    if jitter:
        rng = random.Random(spec.rng_seed)
        off_x = Fraction(rng.randrange(1, 1000), 1000)
        off_y = Fraction(rng.randrange(1, 1000), 1000)
    den = _lcm_den([arena.p, arena.q, off_x, off_y] + [c for s in sites for c in (s.x, s.y)])
    scale = res * den
    # Lattice centre j sits at (j + off) * p / res; multiply everything by scale.
    xs = [int((j + off_x) * arena.p * den) for j in range(res)]
    ys = [int((k + off_y) * arena.q * den) for k in range(res)]
    pts = [(int(s.x * scale), int(s.y * scale)) for s in sites]
    bound = 2 * (max(max(xs), max(ys)) + max(max(abs(a), abs(b)) for a, b in pts)) ** 2
    fits = bound < 2**62
    X = _int_array(xs, fits)[:, None]
    Y = _int_array(ys, fits)[None, :]
    sx, sy = pts[index]
    d1 = np.abs(X - sx) + np.abs(Y - sy)
    d2 = (X - sx) ** 2 + (Y - sy) ** 2
    mine = np.ones(d1.shape, dtype=bool)
    tie = np.zeros(d1.shape, dtype=bool)
    colour = list(black) if black is not None else [False] * len(sites)
    for k, (tx, ty) in enumerate(pts):
        if k == index:
            continue
        e1 = np.abs(X - tx) + np.abs(Y - ty)
        closer = e1 < d1
        level = e1 == d1
        if spec.tie_rule == "LEX":
            e2 = (X - tx) ** 2 + (Y - ty) ** 2
            closer |= level & ((e2 < d2) | ((e2 == d2) & (k < index)))
        elif spec.tie_rule == "Exclude":
            tie |= level
        elif spec.tie_rule == "ToWhite":
            if colour[index] or not colour[k]:
                closer |= level & (colour[index] and not colour[k] or k < index)
        else:  # ToBlack
            if not colour[index] or colour[k]:
                closer |= level & ((not colour[index] and colour[k]) or k < index)
        mine &= ~closer
    tie &= mine
    won = mine & ~tie
    cell = arena.p * arena.q / (res * res)
    count = int(won.sum())
    err = 4 * _perimeter_estimate(won, float(arena.p) / res, float(arena.q) / res) * float(max(arena.p, arena.q)) / res
    return SampledArea(float(count * cell), err, int(tie.sum()), res * res)


def _perimeter_estimate(mask, hx: float, hy: float) -> float:
    """Length of the boundary of a union of lattice cells (staircase length)."""
    m = np.pad(mask, 1).astype(np.int8)
    vertical = int(np.abs(np.diff(m, axis=0)).sum())
    horizontal = int(np.abs(np.diff(m, axis=1)).sum())
    return vertical * hy + horizontal * hx


# ---------------------------------------------------------------------------
# Exact lattice search


def white_rectangles(arena: Arena, arrangement: WhiteArrangement) -> list[tuple[Point, tuple[Fraction, ...]]]:
    """White sites with their (rectangular) Voronoi cells ``(x0, x1, y0, y1)``."""
    p, q = arena.p, arena.q
    if isinstance(arrangement, Row):
        n = arrangement.n
        return [(s, ((k - 1) * p / n, k * p / n, Fraction(0), q)) for k, s in enumerate(row_sites(arena, n), 1)]
    a, b = arrangement.a, arrangement.b
    out = []
    for c in range(1, a + 1):
        for r in range(1, b + 1):
            out.append((grid_site(arena, a, b, c, r), ((c - 1) * p / a, c * p / a, (r - 1) * q / b, r * q / b)))
    return out


def _G(t):
    t = np.maximum(t, 0)
    return t * t


def _strip_area2(lo, hi, coef, const):
    """Twice the length of ``{x in [lo, hi] : coef*x + const < 0}`` (``coef`` in {-2, 0, 2})."""
    length = np.maximum(hi - lo, 0)
    if coef == 0:
        return np.where(const < 0, 2 * length, 0)
    # coef*x + const < 0  <=>  x < -const/coef (coef > 0) or x > -const/coef (coef < 0).
    if coef > 0:
        cut2 = -const  # 2*cut
        inside = np.clip(cut2, 2 * lo, 2 * hi) - 2 * lo
    else:
        cut2 = const
        inside = 2 * hi - np.clip(cut2, 2 * lo, 2 * hi)
    return np.where(length > 0, inside, 0)


def _piece_area8(x0, x1, y0, y1, ax, ay, c):
    """Eight times the area of ``{ax*x + ay*y + c < 0}`` inside each rectangle.

    ``ax, ay`` are scalars in {-2, 0, 2}; bounds and ``c`` are arrays.
    """
    w = np.maximum(x1 - x0, 0)
    h = np.maximum(y1 - y0, 0)
    if ax == 0 and ay == 0:
        return np.where(c < 0, 8 * w * h, 0)
    if ay == 0:
        return 4 * _strip_area2(x0, x1, ax, c) * h
    if ax == 0:
        return 4 * _strip_area2(y0, y1, ay, c) * w
    # Reflect so that both coefficients are +2: 2(x' + y') < -c.
    if ax < 0:
        x0, x1 = -x1, -x0
    if ay < 0:
        y0, y1 = -y1, -y0
    # {x' + y' < m} with m = -c/2.  Doubled: use 2m = -c and doubled coordinates.
    m2 = -c
    lo = _G(m2 - 2 * x0 - 2 * y0) - _G(m2 - 2 * x1 - 2 * y0) - _G(m2 - 2 * x0 - 2 * y1) + _G(m2 - 2 * x1 - 2 * y1)
    # Each term is (2t)^2 and the area is the signed sum of t^2/2, so lo is 8x the area.
    return np.where((w > 0) & (h > 0), lo, 0)


def _axis_pieces(lo, hi, bq, wq):
    """Split ``[lo, hi]`` at ``bq`` (array) and ``wq`` (scalar); each piece
    carries the coefficient and offset of ``|z-bq| - |z-wq|`` there."""
    m1 = np.minimum(bq, wq)
    m2 = np.maximum(bq, wq)
    c1 = np.clip(m1, lo, hi)
    c2 = np.clip(m2, lo, hi)
    out = [(lo + 0 * c1, c1, 0, bq - wq)]  # z below both: (bq - z) - (wq - z)
    b_first = bq <= wq
    # Between: if bq < z < wq then (z - bq) - (wq - z) = 2z - bq - wq, else (bq - z) - (z - wq).
    out.append((c1, c2, None, (b_first, -bq - wq, bq + wq)))
    out.append((c2, hi + 0 * c2, 0, wq - bq))  # above both: (z - bq) - (z - wq)
    return out


def stolen_area_lattice(arena: Arena, arrangement: WhiteArrangement, bx, by, scale: int):
    """Exact stolen areas times eight (in units of ``1/scale^2``) for Black at
    integer-scaled positions ``(bx, by)``; White sites and cells must be
    integral after multiplying by ``scale``."""
    total = np.zeros(bx.shape, dtype=bx.dtype)
    for w, (x0, x1, y0, y1) in white_rectangles(arena, arrangement):
        wx, wy = int(w.x * scale), int(w.y * scale)
        X0, X1, Y0, Y1 = (int(v * scale) for v in (x0, x1, y0, y1))
        xs = _axis_pieces(X0, X1, bx, wx)
        ys = _axis_pieces(Y0, Y1, by, wy)
        for xa, xb, xc, xk in xs:
            for ya, yb, yc, yk in ys:
                for ax, cx, maskx in _expand(xc, xk):
                    for ay, cy, masky in _expand(yc, yk):
                        mask = maskx & masky
                        part = _piece_area8(xa, xb, ya, yb, ax, ay, cx + cy)
                        total += np.where(mask, part, 0)
    return total


def _expand(coef, k):
    """Turn an axis piece description into (coefficient, offset, mask) triples."""
    if coef is not None:
        return [(coef, k, True)]
    b_first, off_up, off_down = k
    # b < z < w: 2z - b - w ; w < z < b: -2z + b + w.
    return [(2, off_up, b_first), (-2, off_down, ~b_first)]


@dataclass(frozen=True)
class SearchResult:
    point: Point
    area: Fraction
    skipped: int
    evaluated: int
    confirmed: bool = field(default=False)
    maximisers: tuple = field(default=(), repr=False)  # every lattice point attaining ``area``


def grid_search_best(arena: Arena, arrangement: WhiteArrangement, spec: SampleSpec = SampleSpec(),
                     window: Optional[tuple] = None) -> SearchResult:
    """Exact best Black position over a lattice of spacing ``p/resolution``.

    Lattice points on a configuration line of any White point, on a White
    cell edge or on the arena boundary are skipped (and counted).  Among
    equal areas the point nearest the arena centre wins, then the
    lexicographically smallest.  ``window = (x0, x1, y0, y1)`` restricts the
    search.  The winner is re-checked with the polygon engine; all tied
    maximisers are returned in ``maximisers`` (winner first).
    """
    step = arena.p / spec.resolution
    whites = arrangement.sites(arena)
    rects = white_rectangles(arena, arrangement)
    den = _lcm_den([arena.p, arena.q, step] + [c for s in whites for c in (s.x, s.y)]
                   + [v for _, r in rects for v in r])
    scale = 2 * den
    nx = spec.resolution
    ny = int(arena.q / step)
    js = np.arange(1, nx, dtype=np.int64)
    ks = np.arange(1, ny + 1, dtype=np.int64)
    step_i = int(step * scale)
    gx = js * step_i
    gy = ks * step_i
    gy = gy[gy < int(arena.q * scale)]
    if window is not None:
        wx0, wx1, wy0, wy1 = (int(as_exact(v) * scale) for v in window)
        gx = gx[(gx >= wx0) & (gx <= wx1)]
        gy = gy[(gy >= wy0) & (gy <= wy1)]
    BX, BY = np.meshgrid(gx, gy, indexing="ij")
    bx, by = BX.ravel(), BY.ravel()
    bad = np.zeros(bx.shape, dtype=bool)
    for w, (x0, x1, y0, y1) in rects:
        wx, wy = int(w.x * scale), int(w.y * scale)
        dx, dy = bx - wx, by - wy
        bad |= (dx == 0) | (dy == 0) | (np.abs(dx) == np.abs(dy))
        bad |= (bx == int(x0 * scale)) | (bx == int(x1 * scale)) | (by == int(y0 * scale)) | (by == int(y1 * scale))
    keep = ~bad
    bx, by = bx[keep], by[keep]
    if bx.size == 0:
        raise DomainError("no admissible lattice points")
    if 8 * (int(max(arena.p, arena.q) * scale) * 4) ** 2 >= 2**62:
        raise DomainError("lattice too fine for 64-bit exact arithmetic")
    area8 = stolen_area_lattice(arena, arrangement, bx, by, scale)
    top = area8.max()
    idx = np.flatnonzero(area8 == top)
    cx, cy = int(arena.p * scale), int(arena.q * scale)  # doubled centre
    dist = np.abs(2 * bx[idx] - cx) + np.abs(2 * by[idx] - cy)
    order = np.lexsort((by[idx], bx[idx], dist))
    win = idx[order[0]]
    point = Point(Fraction(int(bx[win]), scale), Fraction(int(by[win]), scale))
    area = Fraction(int(top), 8 * scale * scale)
    exact = cell_area(arena, whites + [point], len(whites))
    tied = tuple(Point(Fraction(int(bx[k]), scale), Fraction(int(by[k]), scale)) for k in idx[order])
    return SearchResult(point, area, int(bad.sum()), int(bx.size), confirmed=exact == area, maximisers=tied)


# ---------------------------------------------------------------------------
# Randomised invariant batteries


def _frac(v) -> str:
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _random_fraction(rng: random.Random, lo: int, hi: int, den: int) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def _row_trial(rng: random.Random, failures: list, counts: dict) -> None:
    from .partition import section_of_row
    from .row_solver import area_row_closed_form, best_point_row, row_table

    n = rng.randint(2, 6)
    p = Fraction(rng.randint(1, 8))
    q = _random_fraction(rng, 1, 2 * n + 4, 4) * p / n
    if q <= 0:
        q = p / n
    arena = Arena(p, q)
    i = rng.randint(1, n)
    half = p / (2 * n)
    b1 = Point(half * Fraction(rng.randint(-999, 999), 1000), q / 2 * Fraction(rng.randint(-999, 999), 1000))
    try:
        section_of_row(arena, n, i, b1)
    except OnBoundary:
        counts["skipped"] += 1
        return
    whites = row_sites(arena, n)
    z = whites[i - 1] + b1
    closed = area_row_closed_form(arena, n, i, b1)
    exact = cell_area(arena, whites + [z], n)
    counts["closed_form"] += 1
    if closed != exact:
        failures.append({"check": "closed_form", "n": n, "p": _frac(p), "q": _frac(q), "i": i,
                         "b1": [_frac(b1.x), _frac(b1.y)], "closed": _frac(closed), "exact": _frac(exact)})
    t = q / (p / n)
    rows = row_table(n)
    hits = [r for r in rows if r.contains(t)]
    counts["tiling"] += 1
    if not hits or len(hits) > 2:
        failures.append({"check": "tiling", "n": n, "t": _frac(t), "rows": len(hits)})
    best = best_point_row(arena, n)
    counts["dominance"] += 1
    if exact > best.area:
        failures.append({"check": "dominance", "n": n, "p": _frac(p), "q": _frac(q),
                         "sample": _frac(exact), "best": _frac(best.area)})
    if hits and hits[0].area(p, q) != best.area:
        failures.append({"check": "table", "n": n, "t": _frac(t), "table": _frac(hits[0].area(p, q)),
                         "best": _frac(best.area)})
    return arena, whites + [z], exact


def _grid_trial(rng: random.Random, failures: list, counts: dict) -> None:
    from .grid_solver import area_grid_closed_form, best_point_grid, grid_table
    from .partition import section_of_grid
    from .core_geometry import grid_sites

    a, b = rng.randint(2, 5), rng.randint(2, 5)
    s = Fraction(rng.randint(1, 4))
    t = _random_fraction(rng, 1, b + 2, 8) / 2
    t = max(t, Fraction(1, 2))
    arena = Arena(2 * a * t * s, b * s)
    col, row = rng.randint(1, a), rng.randint(1, b)
    h = t * s
    b1 = Point(h * Fraction(rng.randint(-999, 999), 1000), s / 2 * Fraction(rng.randint(-999, 999), 1000))
    try:
        section_of_grid(arena, a, b, (col, row), b1)
    except OnBoundary:
        counts["skipped"] += 1
        return
    whites = grid_sites(arena, a, b)
    z = grid_site(arena, a, b, col, row) + b1
    closed = area_grid_closed_form(arena, a, b, (col, row), b1)
    exact = cell_area(arena, whites + [z], len(whites))
    counts["closed_form"] += 1
    if closed != exact:
        failures.append({"check": "closed_form", "a": a, "b": b, "p": _frac(arena.p), "q": _frac(arena.q),
                         "anchor": [col, row], "b1": [_frac(b1.x), _frac(b1.y)],
                         "closed": _frac(closed), "exact": _frac(exact)})
    rows = grid_table(a, b)
    hits = [r for r in rows if r.contains(t)]
    counts["tiling"] += 1
    if not hits or len(hits) > 2:
        failures.append({"check": "tiling", "a": a, "b": b, "t": _frac(t), "rows": len(hits)})
    best = best_point_grid(arena, a, b)
    counts["dominance"] += 1
    if exact > best.area:
        failures.append({"check": "dominance", "a": a, "b": b, "p": _frac(arena.p), "q": _frac(arena.q),
                         "sample": _frac(exact), "best": _frac(best.area)})
    if hits and hits[0].area(arena.p, arena.q) != best.area:
        failures.append({"check": "table", "a": a, "b": b, "t": _frac(t),
                         "table": _frac(hits[0].area(arena.p, arena.q)), "best": _frac(best.area)})
    return arena, whites + [z], exact


def verify_suite(kind: str, trials: int, rng_seed: int = 0, resolution: Optional[int] = None) -> dict:
    """Randomised checks of closed form against geometry, table tiling and
    best-point dominance.  With ``resolution`` every exact area is also
    compared with :func:`sampled_area` inside its error bound.  Returns a
    JSON-ready dict; failures are listed, never raised."""
    if kind not in ("row", "grid"):
        raise DomainError("kind must be 'row' or 'grid'")
    if trials < 0:
        raise DomainError("trials must be non-negative")
    rng = random.Random(rng_seed)
    failures: list = []
    counts = {"closed_form": 0, "tiling": 0, "dominance": 0, "skipped": 0}
    if resolution is not None:
        counts["sampled"] = 0
        spec = SampleSpec(resolution=resolution)
    trial = _row_trial if kind == "row" else _grid_trial
    for _ in range(trials):
        try:
            case = trial(rng, failures, counts)
        except StackelbergError as exc:
            failures.append({"check": "exception", "error": type(exc).__name__, "message": str(exc)})
            continue
        if case is None or resolution is None:
            continue
        arena, sites, exact = case
        est = sampled_area(arena, sites, len(sites) - 1, spec)
        counts["sampled"] += 1
        if abs(est.value - float(exact)) > est.error_bound:
            failures.append({"check": "sampled", "exact": _frac(exact), "sampled": repr(est.value),
                             "bound": repr(est.error_bound)})
    return {
        "kind": kind,
        "trials": trials,
        "seed": rng_seed,
        "resolution": resolution,
        "checks": counts,
        "failures": failures,
        "passed": not failures,
    }


def report_json(report: dict) -> str:
    """Canonical JSON text for a report (sorted keys, fixed separators)."""
    return json.dumps(report, sort_keys=True, separators=(",", ": "), indent=2) + "\n"
