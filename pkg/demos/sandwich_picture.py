"""Score Black's sandwich against a row and draw it, together with one exact cell."""

import argparse
from pathlib import Path

from stackelberg_l1 import Arena, black_row_arrangement, row_sites, score_arrangement
from stackelberg_l1.cli import render_svg
from stackelberg_l1.core_geometry import cell_pieces


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--p", type=int, default=4)
    parser.add_argument("--q", type=int, default=6)
    parser.add_argument("--out", type=Path, default=Path("sandwich.svg"))
    args = parser.parse_args()

    arena = Arena(args.p, args.q)
    whites = row_sites(arena, args.n)
    blacks = list(black_row_arrangement(arena, args.n))
    report = score_arrangement(arena, whites, blacks)
    print(f"White {report.white_total}, Black {report.black_total} of {arena.p * arena.q}")

    # One of Black's cells in the full diagram.
    sites = whites + blacks
    pieces = cell_pieces(arena, sites, len(whites))
    args.out.write_text(render_svg(arena, whites, blacks, pieces.loops()))
    print(f"wrote {args.out} (cell of Black at ({blacks[0].x}, {blacks[0].y}))")


if __name__ == "__main__":
    main()
