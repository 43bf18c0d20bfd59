"""Acceptance battery.

Every check records one line through the ``acceptance`` fixture; the
per-criterion PASS/FAIL summary is printed at the end of the pytest run.

Criteria 3 and 4 are run twice.  The reference tables (transcribed in
``reference_tables.py``) are checked literally; rows that are genuinely red
carry a strict xfail with the reason.  The tables produced by the library
are then checked with the same tolerances.
"""

import hashlib
import io
import json
import random
import time
from fractions import Fraction as F
from pathlib import Path

import pytest

from reference_tables import grid_rows, row_rows
from stackelberg_l1.cli import run
from stackelberg_l1.core_geometry import Arena, Grid, Point, Row, cell_area, cell_pieces, grid_site, grid_sites, row_sites
from stackelberg_l1.errors import OnBoundary
from stackelberg_l1.grid_solver import area_grid_closed_form, best_point_grid, grid_table, pair_cases
from stackelberg_l1.oracle import SampleSpec, grid_search_best
from stackelberg_l1.partition import (
    QuadrantClass,
    Touching,
    grid_contacts,
    row_contacts,
    section_of_grid,
    section_of_row,
    square_grid_feasible,
)
from stackelberg_l1.row_solver import (
    SectionSpec,
    approach_sequence,
    area_row_closed_form,
    best_point_row,
    black_row_arrangement,
    row_section_constraints,
    row_sections,
    row_table,
    sandwich_condition_holds,
    sandwich_prediction,
    score_arrangement,
)

RESOLUTION = 400
SNAPSHOTS = Path(__file__).parent / "snapshots"


# ---------------------------------------------------------------------------
# Criteria 1 and 2: closed forms against exact cells


def test_criterion_1_row_closed_form(acceptance):
    rng = random.Random(1)
    start = time.perf_counter()
    buckets: dict = {}
    cases = 0
    for n in range(2, 7):
        p = F(n)
        for _ in range(3000):
            q = F(rng.randint(1, 24 * n), 8)
            i = rng.randint(1, n)
            arena = Arena(p, q)
            b1 = Point(F(rng.randint(-999, 999), 1000) * p / (2 * n), F(rng.randint(-999, 999), 1000) * q / 2)
            try:
                label = section_of_row(arena, n, i, b1)
            except OnBoundary:
                continue
            key = (n, label.name, label.touching)
            if buckets.get(key, 0) >= 50:
                continue
            buckets[key] = buckets.get(key, 0) + 1
            cases += 1
            whites = row_sites(arena, n)
            assert area_row_closed_form(arena, n, i, b1) == cell_area(arena, whites + [whites[i - 1] + b1], n), \
                (n, p, q, i, b1)
    elapsed = time.perf_counter() - start
    regimes = {n: {k[2] for k in buckets if k[0] == n} for n in range(2, 7)}
    ok = cases >= 2000 and elapsed < 60 and all(r == set(Touching) for r in regimes.values())
    acceptance(1, ok, f"{cases} row cases in {len(buckets)} (n, section, touching) buckets, "
                      f"all 4 touching regimes for every n, exact equality, {elapsed:.1f}s")
    assert ok


def test_criterion_2_grid_closed_form(acceptance):
    rng = random.Random(2)
    start = time.perf_counter()
    buckets: dict = {}
    regimes, quadrants = set(), set()
    cases = 0
    for a in range(2, 6):
        for b in range(2, 6):
            s = F(1)
            for _ in range(900):
                t = F(rng.randint(4, 8 * (b + 2)), 8)
                arena = Arena(2 * a * t, b * s)
                col, row = rng.randint(1, a), rng.randint(1, b)
                z = Point(F(rng.randint(-999, 999), 1000) * t, F(rng.randint(-999, 999), 1000) * s / 2)
                try:
                    label = section_of_grid(arena, a, b, (col, row), z)
                except OnBoundary:
                    continue
                key = (a, b, label.name, label.touching, label.quadrant_class)
                if buckets.get(key, 0) >= 50:
                    continue
                buckets[key] = buckets.get(key, 0) + 1
                cases += 1
                quadrants.add(label.quadrant_class)
                if label.name != "I":
                    for case in pair_cases(SectionSpec.from_label(label), label.canonical_anchor[1], b):
                        regimes.add((case.regime, (case.i > 0) - (case.i < 0)))
                whites = grid_sites(arena, a, b)
                exact = cell_area(arena, whites + [grid_site(arena, a, b, col, row) + z], len(whites))
                assert area_grid_closed_form(arena, a, b, (col, row), z) == exact, (a, b, arena, col, row, z)
    elapsed = time.perf_counter() - start
    wanted = {("Zero", 0), ("Through", 1), ("Through", -1), ("Terminal", 1), ("Terminal", -1)}
    ok = cases >= 2000 and elapsed < 120 and quadrants == set(QuadrantClass) and regimes == wanted
    acceptance(2, ok, f"{cases} grid cases, quadrant classes {sorted(q.value for q in quadrants)}, "
                      f"{len(regimes)} pair regimes, exact equality, {elapsed:.1f}s")
    assert ok


# ---------------------------------------------------------------------------
# Criteria 3 and 4: best-point tables against the lattice search


def _search(kind, shape, arena, window=None):
    arrangement = Row(*shape) if kind == "row" else Grid(*shape)
    return grid_search_best(arena, arrangement, SampleSpec(resolution=RESOLUTION), window=window)


def _orbit(arena, x, y):
    xs = [None] if x is None else [x, arena.p - x]
    ys = [None] if y is None else [y, arena.q - y]
    return {(u, v) for u in xs for v in ys}


def _reference_points(ref, arena):
    x, y = ref.location(ref.p, ref.q)
    if ref.kind == "row":
        return _orbit(arena, x, None if y is None else arena.q / 2 + y)
    a, b = ref.shape
    w = grid_site(arena, a, b, (a + 1) // 2, (b + 1) // 2)
    return _orbit(arena, None if x is None else w.x + x, None if y is None else w.y + y)


def _distance(z, target):
    x, y = target
    return max(F(0) if x is None else abs(z.x - x), F(0) if y is None else abs(z.y - y))


def _near_value(kind, shape, arena, targets, radius):
    """Best lattice value within ``radius`` (L-infinity) of any target point."""
    best = None
    for x, y in targets:
        window = (F(0) if x is None else x - radius, arena.p if x is None else x + radius,
                  F(0) if y is None else y - radius, arena.q if y is None else y + radius)
        try:
            res = _search(kind, shape, arena, window)
        except Exception:
            continue
        best = res.area if best is None else max(best, res.area)
    return best


_SEARCHES: dict = {}


def _global(ref):
    if ref.ident not in _SEARCHES:
        _SEARCHES[ref.ident] = _search(ref.kind, ref.shape, Arena(ref.p, ref.q))
    return _SEARCHES[ref.ident]


ODD_CONSTANT = ("odd-section constant erratum (-l^2 p^2/4n^2, not -l(l+1) p^2/4n^2): "
                "a corrected odd section beats the stated optimum here")
GRID_ODD = ("grid 2l+1 row erratum: the stated (4l-1)pq/4ab overstates the true (2l+1)pq/4ab term, "
            "so the gap to the lattice optimum exceeds 2(p/400)q")
GRID_B2 = ("b=2 threshold slip ((3+sqrt3) for (3-sqrt3)): Section b+1 already wins here and steals "
           "more than the stated Section b optimum")
WEDGE = ("the optimum is a wedge apex where configuration lines meet; those lattice nodes are excluded "
         "and the best admissible node is more than p/400 away (companion test checks 2 steps)")
EQUIVALENT = ("an equally good optimum exists at another White point (cells clear of the ends are "
              "translation equivalent); the lattice maximum lands on that copy")
TIE_N3 = ("q = 3p/n is where the corrected Odd{1} and Final rows meet; both reach 9/4 and the lattice "
          "maximum sits at the Odd{1} apex")
WRONG_POINT = "the stated point is not the best point here (see the area erratum for this row)"

AREA_RED = {
    "n=3:II": ODD_CONSTANT, "n=3:III": ODD_CONSTANT, "even n:III": ODD_CONSTANT,
    "even n:IV middle": ODD_CONSTANT, "odd n:II": ODD_CONSTANT, "odd n:III": ODD_CONSTANT,
    "odd n:IV middle": ODD_CONSTANT,
    "x* optima:2l+1 (l=2)": GRID_ODD, "b != 2:2l+1 (l=2)": GRID_ODD,
    "x* optima:b": GRID_B2, "b = 2, a != 2:b": GRID_B2, "b = 2, a = 2:b": GRID_B2,
    "b = 2, a = 2:b golden": GRID_B2,
}
LOCATION_RED = {
    "n=2:III": WEDGE, "n=2:III golden": WEDGE, "n=3:IV": WEDGE, "n=3:IV golden": TIE_N3,
    "even n:III": WEDGE, "even n:IV bottom": WEDGE, "even n:VI": WEDGE, "even n:2l (l=4) = n": WEDGE,
    "even n:n+1": WEDGE, "even n:n golden": WEDGE, "odd n:n+1": WEDGE,
    "odd n:IV bottom": EQUIVALENT, "odd n:VI": EQUIVALENT, "odd n:2l (l=4)": EQUIVALENT,
    "x* optima:III": EQUIVALENT, "b != 2:III": EQUIVALENT,
    "n=3:II": WRONG_POINT, "odd n:II": WRONG_POINT, "odd n:III": WRONG_POINT,
    "even n:IV middle": WRONG_POINT, "odd n:IV middle": WRONG_POINT, "b = 2, a = 2:b golden": WRONG_POINT,
}


def _key(ref):
    return f"{ref.table}:{ref.section}"


def _params(refs, red):
    out = []
    for ref in refs:
        marks = [pytest.mark.xfail(strict=True, reason=red[_key(ref)])] if _key(ref) in red else []
        out.append(pytest.param(ref, id=ref.ident, marks=marks))
    return out


def _area_check(ref, acceptance, criterion):
    assert ref.condition(ref.p, ref.q), "instance must lie strictly inside the row's condition"
    res = _global(ref)
    table = ref.area(ref.p, ref.q)
    gap = table - res.area
    bound = 2 * (ref.p / RESOLUTION) * ref.q
    ok = res.confirmed and res.area <= table and gap <= bound
    acceptance(criterion, ok, f"[{ref.ident}] area: lattice {float(res.area):.6f} vs table {float(table):.6f}, "
                              f"gap {float(gap):.2e} <= {float(bound):.2e}")
    assert ok


def _location_check(ref, acceptance, criterion):
    res = _global(ref)
    targets = _reference_points(ref, Arena(ref.p, ref.q))
    d = min(_distance(z, t) for z in res.maximisers for t in targets)
    tol = ref.p / RESOLUTION
    ok = d <= tol
    acceptance(criterion, ok, f"[{ref.ident}] location: distance {float(d / tol):.2f} x p/400")
    assert ok


def _near_optimal_check(ref):
    """The lattice two steps around the stated point reaches the global lattice
    optimum up to the area tolerance."""
    arena = Arena(ref.p, ref.q)
    step = ref.p / RESOLUTION
    near = _near_value(ref.kind, ref.shape, arena, _reference_points(ref, arena), 2 * step)
    assert near is not None and _global(ref).area - near <= 2 * step * ref.q


ROW_REFS = row_rows()
GRID_REFS = grid_rows()


@pytest.mark.parametrize("ref", _params(ROW_REFS, AREA_RED))
def test_criterion_3_reference_area(ref, acceptance):
    _area_check(ref, acceptance, 3)


@pytest.mark.parametrize("ref", _params(ROW_REFS, LOCATION_RED))
def test_criterion_3_reference_location(ref, acceptance):
    _location_check(ref, acceptance, 3)


@pytest.mark.parametrize("ref", [pytest.param(r, id=r.ident) for r in ROW_REFS if _key(r) not in AREA_RED])
def test_criterion_3_reference_point_is_near_optimal(ref):
    _near_optimal_check(ref)


@pytest.mark.parametrize("p,q,n,value", [(2, 2, 2, F(5, 4)), (3, 3, 3, F(9, 4)), (4, 8, 4, F(23, 2))])
def test_criterion_3_goldens(p, q, n, value, acceptance):
    arena = Arena(p, q)
    exact = best_point_row(arena, n).area
    res = _search("row", (n,), arena)
    ok = exact == value and res.area <= value and value - res.area <= 2 * F(p, RESOLUTION) * q
    acceptance(3, ok, f"golden {value} at (p,q,n)=({p},{q},{n}): solver {exact}, lattice {float(res.area):.6f}")
    assert ok


def _corrected_row_cases():
    out = []
    for n in range(2, 7):
        for row in row_table(n):
            lo = max(float(row.lo), 0.25)
            t = F(lo + 1).limit_denominator(8) if row.hi is None else F((lo + float(row.hi)) / 2).limit_denominator(64)
            out.append(pytest.param(n, row, t, id=f"n={n}:{row.section}:{row.branch}:t={t}"))
    return out


@pytest.mark.parametrize("n,row,t", _corrected_row_cases())
def test_criterion_3_library_table(n, row, t, acceptance):
    assert row.contains(t)
    p, q = F(n), t
    arena = Arena(p, q)
    res = _search("row", (n,), arena)
    table = row.area(p, q)
    step = p / RESOLUTION
    local = row.location(p, q)
    w = row_sites(arena, n)[row.anchor - 1]
    near = _near_value("row", (n,), arena, _orbit(arena, w.x + local.x, w.y + local.y), 2 * step)
    ok = (res.area <= table and table - res.area <= 2 * step * q
          and near is not None and res.area - near <= 2 * step * q)
    acceptance(3, ok, f"[library n={n} {row.section} t={t}] lattice {float(res.area):.6f} <= {float(table):.6f}, "
                      f"near stated point {float(near or 0):.6f}")
    assert ok


@pytest.mark.parametrize("ref", _params(GRID_REFS, AREA_RED))
def test_criterion_4_reference_area(ref, acceptance):
    _area_check(ref, acceptance, 4)


@pytest.mark.parametrize("ref", _params(GRID_REFS, LOCATION_RED))
def test_criterion_4_reference_location(ref, acceptance):
    _location_check(ref, acceptance, 4)


@pytest.mark.parametrize("ref", [pytest.param(r, id=r.ident) for r in GRID_REFS if _key(r) not in AREA_RED])
def test_criterion_4_reference_point_is_near_optimal(ref):
    _near_optimal_check(ref)


def test_criterion_4_golden_13_2(acceptance):
    arena = Arena(8, 8)
    exact = best_point_grid(arena, 2, 4).area
    res = _search("grid", (2, 4), arena)
    ok = exact == F(13, 2) and res.area <= exact and exact - res.area <= 2 * F(8, RESOLUTION) * 8
    acceptance(4, ok, f"golden 13/2 at a=2,b=4,p=q=8: solver {exact}, lattice {float(res.area):.6f}")
    assert ok


@pytest.mark.xfail(strict=True, reason=GRID_B2 + "; the true best steal at a=b=2, p=4, q=2 is 3/2")
def test_criterion_4_golden_4_3(acceptance):
    exact = best_point_grid(Arena(4, 2), 2, 2).area
    ok = exact == F(4, 3)
    acceptance(4, ok, f"golden 4/3 at a=b=2,p=4,q=2: solver {exact}")
    assert ok


def _corrected_grid_cases():
    out = []
    for a in (2, 3, 4):
        for b in (2, 3, 4, 5):
            for row in grid_table(a, b):
                lo = float(row.lo)
                t = F(lo + 1).limit_denominator(8) if row.hi is None else F((lo + float(row.hi)) / 2).limit_denominator(64)
                out.append(pytest.param(a, b, row, t, id=f"{a}x{b}:{row.section}:{row.branch}:t={t}"))
    return out


@pytest.mark.parametrize("a,b,row,t", _corrected_grid_cases())
def test_criterion_4_library_table(a, b, row, t, acceptance):
    assert row.contains(t)
    q = F(b)
    p = 2 * a * t
    arena = Arena(p, q)
    res = _search("grid", (a, b), arena)
    table = row.area(p, q)
    step = p / RESOLUTION
    local = row.location(p, q)
    w = grid_site(arena, a, b, *row.anchor)
    near = _near_value("grid", (a, b), arena, _orbit(arena, w.x + local.x, w.y + local.y), 2 * step)
    ok = (res.area <= table and table - res.area <= 2 * step * q
          and near is not None and res.area - near <= 2 * step * q)
    acceptance(4, ok, f"[library {a}x{b} {row.section} t={t}] lattice {float(res.area):.6f} <= {float(table):.6f}")
    assert ok


# ---------------------------------------------------------------------------
# Criteria 5 to 9


def test_criterion_5_sandwich(acceptance):
    checked = 0
    for n in (2, 4, 6):
        p = F(n)
        for q in (F(227, 100), F(5, 2), F(3), F(4), F(7)):
            arena = Arena(p, q)
            assert sandwich_condition_holds(arena, n)
            rep = score_arrangement(arena, row_sites(arena, n), black_row_arrangement(arena, n))
            assert rep.black_total == p * q - 3 * p * p / (4 * n) == sandwich_prediction(arena, n)
            checked += 1
    golden = score_arrangement(Arena(2, 3), row_sites(Arena(2, 3), 2), black_row_arrangement(Arena(2, 3), 2))
    ok = golden.black_total == F(9, 2) and checked == 15
    acceptance(5, ok, f"sandwich equals pq - 3p^2/4n on {checked} instances (n=2,4,6); "
                      f"golden (2,3,2) -> {golden.black_total}")
    assert ok


def test_criterion_6_approach_limit(acceptance):
    C = F(1, 4)
    rows = 0
    for arena, n in ((Arena(6, 2), 3), (Arena(4, 3), 2), (Arena(10, 1), 5)):
        seq = approach_sequence(arena, n)
        areas = [a for _, _, a, _ in seq]
        assert all(x < y for x, y in zip(areas, areas[1:]))
        for k, _, area, short in seq:
            # The shortfall is exactly C * 10^-2k, so the strict bound holds for any constant above C.
            assert 0 < short == C * F(1, 10 ** (2 * k)) < 2 * C * F(1, 10 ** (2 * k))
            rows += 1
    acceptance(6, True, f"monotone increase towards pq/2n on {rows} steps; shortfall = C*10^-2k with C = {C}")


def test_criterion_7_square_grid(acceptance):
    got = [square_grid_feasible(Arena(2, 2), 4), square_grid_feasible(Arena(3, 2), 6),
           square_grid_feasible(Arena(2, 3), 4)]
    ok = got == [(2, 2), (3, 2), None]
    acceptance(7, ok, f"(2,2,4) -> {got[0]}, (3,2,6) -> {got[1]}, (2,3,4) -> {got[2]}")
    assert ok


def _exactly_one_row_section(arena, n, label):
    i = label.canonical_anchor
    inside = [spec for spec in row_sections(n, i)
              if all(hp.value(label.local) < 0 for hp in row_section_constraints(arena.p, arena.q, n, i, spec))]
    return inside == [SectionSpec.from_label(label)]


def test_criterion_8_partition_sanity(acceptance):
    rng = random.Random(8)
    counts = {"row": 0, "grid": 0}
    failures = []
    while counts["row"] < 10_000:
        n = rng.randint(1, 6)
        p, q = F(rng.randint(1, 12)), F(rng.randint(1, 30), rng.randint(1, 4))
        arena = Arena(p, q)
        whites = row_sites(arena, n)
        i = rng.randint(1, n)
        b1 = Point(F(rng.randint(-999, 999), 1000) * p / (2 * n), F(rng.randint(-999, 999), 1000) * q / 2)
        try:
            label = section_of_row(arena, n, i, b1)
        except OnBoundary:
            continue
        counts["row"] += 1
        pieces = cell_pieces(arena, whites + [whites[i - 1] + b1], n)
        real = {k + 1 for k, w in enumerate(whites)
                if pieces.area_within(w.x - p / (2 * n), w.x + p / (2 * n), 0, q) > 0}
        if real != row_contacts(label, n) or not _exactly_one_row_section(arena, n, label):
            failures.append(("row", n, p, q, i, b1))
    while counts["grid"] < 10_000:
        a, b = rng.randint(2, 5), rng.randint(2, 5)
        q = F(rng.randint(1, 12))
        p = q * a / b * F(rng.randint(100, 400), 100)
        arena = Arena(p, q)
        whites = grid_sites(arena, a, b)
        col, row = rng.randint(1, a), rng.randint(1, b)
        z = Point(F(rng.randint(-999, 999), 1000) * p / (2 * a), F(rng.randint(-999, 999), 1000) * q / (2 * b))
        try:
            label = section_of_grid(arena, a, b, (col, row), z)
        except OnBoundary:
            continue
        counts["grid"] += 1
        pieces = cell_pieces(arena, whites + [grid_site(arena, a, b, col, row) + z], len(whites))
        hx, hy = p / (2 * a), q / (2 * b)
        real = {(c, r) for c in range(1, a + 1) for r in range(1, b + 1)
                if pieces.area_within(*(lambda w: (w.x - hx, w.x + hx, w.y - hy, w.y + hy))(grid_site(arena, a, b, c, r))) > 0}
        if real != grid_contacts(label, a, b):
            failures.append(("grid", a, b, p, q, col, row, z))
    ok = not failures
    acceptance(8, ok, f"{counts['row']} row and {counts['grid']} grid points: one label each, "
                      f"contact sets match geometry, {len(failures)} failures")
    assert ok, failures[:5]


def _run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue()


def _svg_bytes(tmp_path, name, *argv):
    path = tmp_path / name
    assert _run(*argv, "--svg", str(path))[0] == 0
    return path.read_bytes()


def test_criterion_9_determinism(tmp_path, acceptance):
    first = _run("verify", "--kind", "row", "--trials", "100", "--seed", "7", "--json")
    second = _run("verify", "--kind", "row", "--trials", "100", "--seed", "7", "--json")
    assert first[0] == 0 and json.loads(first[1])["passed"]
    snaps = {
        "cell.svg": ("cell", "--p", "6", "--q", "2", "--n", "3", "--i", "2", "--bx", "1/5", "--by", "1/10"),
        "arrangement.svg": ("arrangement", "--p", "2", "--q", "3", "--n", "2"),
        "grid_arrangement.svg": ("arrangement", "--p", "4", "--q", "2", "--a", "2", "--b", "2"),
    }
    same = True
    for name, argv in snaps.items():
        one, two = _svg_bytes(tmp_path, "1" + name, *argv), _svg_bytes(tmp_path, "2" + name, *argv)
        same &= one == two == (SNAPSHOTS / name).read_bytes()
    ok = first == second and same
    digest = hashlib.sha256(first[1].encode()).hexdigest()[:12]
    acceptance(9, ok, f"verify --kind row --trials 100 --seed 7 byte-identical twice (sha256 {digest}); "
                      f"{len(snaps)} SVG snapshots byte-identical")
    assert ok
