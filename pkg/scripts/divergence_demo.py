#!/usr/bin/env python3
"""Show pointwise divergence of the approximants along recurring poles.

With the harmonic-repeated pole scheme the values 1/4, 1/5, 1/6, ...
each serve as the designated pole z_k for infinitely many blocks k.  At
such a point the block-k approximant r_(n_k) has q(z_k) = 0 exactly, so
|f - r_(n_k)| is infinite along that subsequence of orders: the sequence
of approximants cannot converge there, even though every underlying
system is well conditioned.  The script prints the error table and marks
the infinite entries.

Example:
    python3 scripts/divergence_demo.py --k-max 6 --points 1/4,9/10
"""

import argparse
import math
import sys
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from padelab import divergence_scan


def parse_points(spec: str) -> tuple:
    return tuple(Fraction(tok) for tok in spec.split(",") if tok.strip())


def fmt(err: float) -> str:
    return "DIVERGES" if math.isinf(err) else f"{err:.3e}"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--points", default="1/4",
                    help="comma-separated probe points, exact rationals")
    ap.add_argument("--float", action="store_true", dest="float_mode",
                    help="run the float pipeline instead of exact rationals")
    args = ap.parse_args()

    points = parse_points(args.points)
    table = divergence_scan(args.k_max, scheme="harmonic_repeated",
                            exact=not args.float_mode, points=points)

    header = f"{'k':>3} {'n':>4} {'z_k':>8} {'err at z_k':>12}"
    for p in table.points:
        header += f" {'err at ' + format(p.real, '.4g'):>14}"
    print(header)
    for row in table.rows:
        line = (f"{row.k:>3} {row.n:>4} {row.z_k.real:>8.4f} "
                f"{fmt(row.error_at_zk):>12}")
        for e in row.extras:
            line += f" {fmt(e.error):>14}"
        print(line)

    values: dict = {}
    for row in table.rows:
        values.setdefault(row.z_k, []).append(row.k)
    recurring = {z: ks for z, ks in values.items() if len(ks) >= 2}
    print()
    for z, ks in sorted(recurring.items(), key=lambda item: item[0].real):
        print(f"pole value {z.real:.4f} recurs at k = {ks}: the error there "
              "is infinite in each of those blocks")
    if recurring:
        print("=> no pointwise limit exists at a recurring pole value")
    return 0


if __name__ == "__main__":
    sys.exit(main())
