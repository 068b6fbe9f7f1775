"""Local doubling slopes of the two-form correlation count and of the
eliminated system count that bounds it, to see where the asymptotic regime starts."""

import argparse
import math

from cubelab import counting
from cubelab.lab import EXAMPLE_2x4


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--Ns", type=int, nargs="+", default=[100, 200, 400, 800, 1600, 3200])
    ap.add_argument("--bound", action="store_true", help="also count the eliminated system")
    args = ap.parse_args()

    prev = None
    for N in args.Ns:
        xi = counting.count_xi(EXAMPLE_2x4, None, N).count
        line = f"N={N:6d}  Xi={xi:14d}"
        if prev is not None:
            line += f"  local slope {math.log(xi / prev[1]) / math.log(N / prev[0]):.3f}"
        if args.bound:
            b = counting.xi_reduction_bound(EXAMPLE_2x4, None, N)
            line += f"  system={b.count} (P={b.extra['P']})"
        print(line)
        prev = (N, xi)


if __name__ == "__main__":
    main()
