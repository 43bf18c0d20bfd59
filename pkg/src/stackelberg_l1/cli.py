"""Command-line front end (``stackelberg-l1``).

Rational arguments accept ``"num/den"`` or decimal strings and are read
exactly.  Output is a short human listing, or one JSON object per call
with ``--json``.  Exit status: 0 on success, 1 on a domain error, 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import Context, Decimal
from fractions import Fraction
from typing import Optional, Sequence

from .core_geometry import Arena, Point, cell_pieces, grid_site, grid_sites, row_sites
from .errors import StackelbergError
from .partition import config_lines, section_of_grid, section_of_row

__all__ = ["main", "render_svg", "run", "fraction_text", "decimal_text"]

_DEC = Context(prec=12)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def fraction_text(v) -> str:
    v = Fraction(v)
    return str(v)


def decimal_text(v) -> str:
    v = Fraction(v)
    d = _DEC.divide(Decimal(v.numerator), Decimal(v.denominator))
    return format(d.normalize(_DEC), "f")


def _point_text(z: Point) -> str:
    return f"({fraction_text(z.x)}, {fraction_text(z.y)})"


def _exact(v) -> dict:
    return {"exact": fraction_text(v), "decimal": decimal_text(v)}


def _point_json(z: Point) -> dict:
    return {"x": fraction_text(z.x), "y": fraction_text(z.y), "text": _point_text(z)}


# ---------------------------------------------------------------------------
# SVG


def _num(v) -> str:
    text = f"{float(v):.6f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def render_svg(arena: Arena, whites: Sequence[Point], blacks: Sequence[Point] = (),
               cells: Sequence[Sequence[Point]] = (), lines: Sequence[tuple[Point, Point]] = ()) -> str:
    """Deterministic SVG 1.1 picture; the view box is the arena and ``y`` points up.

    ``cells`` are highlighted polygons, ``lines`` are segments such as
    configuration lines.
    """
    p, q = arena.p, arena.q
    r = min(p, q) / 60

    def xy(z: Point) -> str:
        return f"{_num(z.x)},{_num(q - z.y)}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="0 0 {_num(p)} {_num(q)}" '
        f'width="{_num(p * 100)}" height="{_num(q * 100)}">',
        f'<rect x="0" y="0" width="{_num(p)}" height="{_num(q)}" fill="white" stroke="black" '
        f'stroke-width="{_num(r / 3)}"/>',
    ]
    for poly in cells:
        pts = " ".join(xy(z) for z in poly)
        out.append(f'<polygon class="cell" points="{pts}" fill="#9ecae1" fill-opacity="0.6" '
                   f'stroke="#08519c" stroke-width="{_num(r / 3)}"/>')
    for a, b in lines:
        out.append(f'<line class="config" x1="{_num(a.x)}" y1="{_num(q - a.y)}" x2="{_num(b.x)}" '
                   f'y2="{_num(q - b.y)}" stroke="#999999" stroke-width="{_num(r / 4)}" '
                   f'stroke-dasharray="{_num(r)},{_num(r)}"/>')
    for z in whites:
        out.append(f'<circle class="white" cx="{_num(z.x)}" cy="{_num(q - z.y)}" r="{_num(r)}" '
                   f'fill="white" stroke="black" stroke-width="{_num(r / 3)}"/>')
    for z in blacks:
        out.append(f'<circle class="black" cx="{_num(z.x)}" cy="{_num(q - z.y)}" r="{_num(r)}" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _clipped_config_lines(arena: Arena, site: Point) -> list[tuple[Point, Point]]:
    segs = []
    for line in config_lines(site):
        dx, dy = line.direction
        ts = []
        if dx:
            ts.append((arena.p - site.x) / dx if dx > 0 else -site.x / dx)
        if dy:
            ts.append((arena.q - site.y) / dy if dy > 0 else -site.y / dy)
        t = min(ts)
        if t > 0:
            segs.append((site, Point(site.x + dx * t, site.y + dy * t)))
    return segs


def _write_svg(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# Commands


def _arena(args) -> Arena:
    return Arena(args.p, args.q)


def _is_grid(args) -> bool:
    if args.n is not None and (args.a is not None or args.b is not None):
        raise _Usage("give either --n or --a/--b, not both")
    if args.n is None and (args.a is None or args.b is None):
        raise _Usage("give --n, or both --a and --b")
    return args.n is None


class _Usage(Exception):
    pass


def _needs_rotation(arena: Arena, a: int, b: int) -> bool:
    return arena.p / a < arena.q / b


def _record_json(rec) -> dict:
    out = {
        "area": _exact(rec.area),
        "local": _point_json(rec.local),
        "location": _point_json(rec.location),
        "anchor": list(rec.anchor) if isinstance(rec.anchor, tuple) else rec.anchor,
        "section": rec.section,
        "section_number": rec.section_number,
        "touching": rec.touching.name,
        "branch": rec.branch,
        "flags": {"approach_limit": rec.approach_limit, "tie": rec.tie, "rotated": rec.rotated},
        "attained": None if rec.attained is None else _exact(rec.attained),
    }
    if rec.table_row is not None:
        out["table_row"] = rec.table_row.describe()
    return out


def cmd_best_point(args) -> dict:
    from .grid_solver import best_point_grid
    from .row_solver import best_point_row

    arena = _arena(args)
    if _is_grid(args):
        rec = best_point_grid(arena, args.a, args.b, rotate=True)
    else:
        rec = best_point_row(arena, args.n)
    return _record_json(rec)


def _anchor_and_sites(args, arena: Arena):
    """Whites, anchor site, anchor id and Black's absolute position."""
    local = Point(args.bx, args.by)
    if _is_grid(args):
        if args.anchor_col is None or args.anchor_row is None:
            raise _Usage("grids need --anchor-col and --anchor-row")
        whites = grid_sites(arena, args.a, args.b)
        anchor = (args.anchor_col, args.anchor_row)
        if not (1 <= anchor[0] <= args.a and 1 <= anchor[1] <= args.b):
            raise _Usage("anchor outside the grid")
        site = grid_site(arena, args.a, args.b, *anchor)
    else:
        if args.i is None:
            raise _Usage("rows need --i")
        if not 1 <= args.i <= args.n:
            raise _Usage("--i must lie in 1..n")
        whites = row_sites(arena, args.n)
        anchor = args.i
        site = whites[args.i - 1]
    return whites, anchor, site + local, local


def _label(args, arena: Arena, anchor, local: Point):
    """Section label, rotating grids that violate the orientation."""
    if isinstance(anchor, tuple):
        if _needs_rotation(arena, args.a, args.b):
            turned = Arena(arena.q, arena.p)
            return section_of_grid(turned, args.b, args.a, (anchor[1], anchor[0]), Point(local.y, local.x)), True
        return section_of_grid(arena, args.a, args.b, anchor, local), False
    return section_of_row(arena, args.n, anchor, local), False


def _label_json(label, rotated: bool) -> dict:
    out = {
        "name": label.name,
        "number": label.number,
        "roman": label.roman,
        "family": label.family,
        "kind": label.kind.name,
        "touching": label.touching.name,
        "anchor": list(label.anchor) if isinstance(label.anchor, tuple) else label.anchor,
        "canonical_anchor": (list(label.canonical_anchor) if isinstance(label.canonical_anchor, tuple)
                             else label.canonical_anchor),
        "flip_x": label.flip_x,
        "flip_y": label.flip_y,
        "canonical_local": _point_json(label.local),
        "rotated": rotated,
    }
    if label.quadrant_class is not None:
        out["quadrant_class"] = label.quadrant_class.name
    return out


def cmd_section(args) -> dict:
    arena = _arena(args)
    _, anchor, _, local = _anchor_and_sites(args, arena)
    label, rotated = _label(args, arena, anchor, local)
    return {"section": _label_json(label, rotated)}


def cmd_cell(args) -> dict:
    from .oracle import SampleSpec, sampled_area

    arena = _arena(args)
    whites, anchor, z, local = _anchor_and_sites(args, arena)
    sites = whites + [z]
    pieces = cell_pieces(arena, sites, len(whites))
    out = {"black": _point_json(z), "local": _point_json(local), "area": _exact(pieces.area),
           "flags": {"degenerate_bisector_used": pieces.degenerate_used}}
    try:
        label, rotated = _label(args, arena, anchor, local)
    except StackelbergError as exc:
        out["section"] = None
        out["closed_form"] = None
        out["note"] = f"{type(exc).__name__}: {exc}"
    else:
        out["section"] = _label_json(label, rotated)
        if rotated:
            from .grid_solver import area_grid_closed_form

            turned = Arena(arena.q, arena.p)
            closed = area_grid_closed_form(turned, args.b, args.a, (anchor[1], anchor[0]), Point(local.y, local.x))
        elif isinstance(anchor, tuple):
            from .grid_solver import area_grid_closed_form

            closed = area_grid_closed_form(arena, args.a, args.b, anchor, local)
        else:
            from .row_solver import area_row_closed_form

            closed = area_row_closed_form(arena, args.n, anchor, local)
        out["closed_form"] = _exact(closed)
    if args.sample:
        est = sampled_area(arena, sites, len(whites), SampleSpec(resolution=args.sample))
        out["sampled"] = {"value": round(est.value, 12), "error_bound": round(est.error_bound, 12),
                          "resolution": args.sample}
    if args.svg:
        loops = pieces.loops()
        _write_svg(args.svg, render_svg(arena, whites, [z], loops, _clipped_config_lines(arena, z)))
        out["svg"] = args.svg
    return out


def cmd_arrangement(args) -> dict:
    from .row_solver import black_row_arrangement, score_arrangement

    arena = _arena(args)
    if _is_grid(args):
        from .grid_solver import black_grid_arrangement

        a, b, turned = args.a, args.b, arena
        rotated = _needs_rotation(arena, a, b)
        if rotated:
            a, b, turned = b, a, Arena(arena.q, arena.p)
        blacks = black_grid_arrangement(turned, a, b, args.delta)
        whites = grid_sites(turned, a, b)
        if rotated:
            whites = grid_sites(arena, args.a, args.b)
            blacks = type(blacks)(tuple(Point(z.y, z.x) for z in blacks.points), blacks.approach_limit,
                                  blacks.heuristic, blacks.delta)
    else:
        rotated = False
        whites = row_sites(arena, args.n)
        blacks = black_row_arrangement(arena, args.n, args.delta)
    report = score_arrangement(arena, whites, blacks)
    out = {
        "white_total": _exact(report.white_total),
        "black_total": _exact(report.black_total),
        "blacks": [_point_json(z) for z in blacks],
        "per_site": [{"site": _point_json(z), "colour": c, "area": _exact(v)} for z, c, v in report.per_site],
        "flags": {"approach_limit": blacks.approach_limit, "heuristic": blacks.heuristic,
                  "degenerate_bisector_used": report.degenerate, "rotated": rotated},
        "delta": None if blacks.delta is None else fraction_text(blacks.delta),
    }
    if args.svg:
        sites = whites + list(blacks)
        priority = [0] * len(whites) + [1] * len(blacks)
        loops = [loop for k in range(len(whites), len(sites))
                 for loop in cell_pieces(arena, sites, k, priority).loops()]
        _write_svg(args.svg, render_svg(arena, whites, list(blacks), loops))
        out["svg"] = args.svg
    return out


def cmd_verify(args) -> dict:
    from .oracle import verify_suite

    seed = args.seed
    if seed is None:
        seed = int(os.environ.get("STACKELBERG_SEED", "0"))
    return verify_suite(args.kind, args.trials, seed, resolution=args.resolution or None)


# ---------------------------------------------------------------------------
# Parsing and output


def _add_shape(sp, with_anchor: bool = False) -> None:
    sp.add_argument("--p", type=parse_rational, required=True, help="arena width")
    sp.add_argument("--q", type=parse_rational, required=True, help="arena height")
    sp.add_argument("--n", type=int, help="row of n White points")
    sp.add_argument("--a", type=int, help="grid columns")
    sp.add_argument("--b", type=int, help="grid rows")
    if with_anchor:
        sp.add_argument("--i", type=int, help="row anchor (1-based)")
        sp.add_argument("--anchor-col", type=int, help="grid anchor column (1-based)")
        sp.add_argument("--anchor-row", type=int, help="grid anchor row (1-based)")
        sp.add_argument("--bx", type=parse_rational, required=True, help="Black's x offset from the anchor")
        sp.add_argument("--by", type=parse_rational, required=True, help="Black's y offset from the anchor")
    sp.add_argument("--json", action="store_true", help="print one JSON object")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stackelberg-l1", description="Exact one-round L1 Voronoi game.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("best-point", help="Black's best single placement")
    _add_shape(sp)
    sp.set_defaults(func=cmd_best_point)

    sp = sub.add_parser("cell", help="exact cell of Black at an offset from a White point")
    _add_shape(sp, with_anchor=True)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true", help="exact area only (default)")
    mode.add_argument("--sample", type=int, metavar="M", help="also estimate on an M x M lattice")
    sp.add_argument("--svg", metavar="PATH")
    sp.set_defaults(func=cmd_cell)

    sp = sub.add_parser("arrangement", help="score Black's sandwich arrangement")
    _add_shape(sp)
    sp.add_argument("--delta", type=parse_rational, help="offset of approach points")
    sp.add_argument("--svg", metavar="PATH")
    sp.set_defaults(func=cmd_arrangement)

    sp = sub.add_parser("verify", help="randomised invariant checks")
    sp.add_argument("--kind", choices=("row", "grid"), required=True)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, help="defaults to $STACKELBERG_SEED or 0")
    sp.add_argument("--resolution", type=int, default=0, help="also compare with an M x M lattice estimate")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("section", help="section label of Black's offset")
    _add_shape(sp, with_anchor=True)
    sp.set_defaults(func=cmd_section)
    return parser


def _flatten(prefix: str, value, lines: list) -> None:
    if isinstance(value, dict):
        if set(value) == {"exact", "decimal"}:
            lines.append(f"{prefix}: {value['exact']} (~{value['decimal']})")
            return
        if "text" in value and set(value) == {"x", "y", "text"}:
            lines.append(f"{prefix}: {value['text']}")
            return
        for k in value:
            _flatten(f"{prefix}.{k}" if prefix else k, value[k], lines)
    elif isinstance(value, list) and value and isinstance(value[0], dict):
        for k, item in enumerate(value):
            _flatten(f"{prefix}[{k}]", item, lines)
    else:
        lines.append(f"{prefix}: {json.dumps(value) if not isinstance(value, str) else value}")


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except _Usage as exc:
        parser.print_usage(stderr)
        print(f"stackelberg-l1: error: {exc}", file=stderr)
        return 2
    except StackelbergError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1
    record = {"command": args.command, "inputs": _inputs(args), **result}
    if args.json:
        stdout.write(json.dumps(record, sort_keys=True, indent=2) + "\n")
    else:
        lines: list = []
        _flatten("", record, lines)
        stdout.write("\n".join(lines) + "\n")
    return 0


def _inputs(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in ("func", "command", "json") or v is None or v is False:
            continue
        out[k] = fraction_text(v) if isinstance(v, Fraction) else v
    return out


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
