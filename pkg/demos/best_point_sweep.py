"""Sweep the arena height and print Black's best single reply to a row of White points."""

import argparse
from fractions import Fraction

from stackelberg_l1 import Arena, best_point_row, row_table


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=4)
    parser.add_argument("--p", type=Fraction, default=Fraction(4))
    parser.add_argument("--steps", type=int, default=12)
    args = parser.parse_args()

    print(f"table for n={args.n} (t = q/(p/n)):")
    for row in row_table(args.n):
        print("  ", row.describe())
    print()
    pitch = args.p / args.n
    for k in range(1, args.steps + 1):
        q = pitch * Fraction(k, 2)
        rec = best_point_row(Arena(args.p, q), args.n)
        share = rec.area / (args.p * q)
        print(f"q={str(q):>6}  section={rec.section:<9} area={str(rec.area):>10}  share={float(share):.3f}"
              f"  at ({rec.location.x}, {rec.location.y})")


if __name__ == "__main__":
    main()
