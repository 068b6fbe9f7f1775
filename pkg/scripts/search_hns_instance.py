"""Search small highly non-singular 2x5 matrices for a singular-series test instance.

A candidate must have a positive real solution of C n = 0 (checked by linear
programming) and strictly shrinking differences between S(Q) at Q = 8, 16,
32, 64.  Candidates are printed with their partial sums.
"""

import argparse
import itertools

import numpy as np
from scipy.optimize import linprog

from cubelab import circle
from cubelab.matrices import IntMatrix, is_highly_nonsingular


def has_positive_solution(C) -> bool:
    # maximise nothing subject to C n = 0, n >= 1 (scale invariance makes 1 harmless)
    res = linprog(np.zeros(len(C[0])), A_eq=np.array(C), b_eq=np.zeros(len(C)),
                  bounds=[(1, None)] * len(C[0]), method="highs")
    return res.status == 0


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--bound", type=int, default=3)
    ap.add_argument("--limit", type=int, default=10, help="stop after this many hits")
    args = ap.parse_args()

    rng = range(-args.bound, args.bound + 1)
    hits = 0
    # reduced echelon form (I | B) keeps the search small
    for tail in itertools.product(rng, repeat=6):
        C = [[1, 0, *tail[:3]], [0, 1, *tail[3:]]]
        if not is_highly_nonsingular(IntMatrix.from_rows(C)) or not has_positive_solution(C):
            continue
        S = [circle.singular_series(Q, C).value for Q in (8, 16, 32, 64)]
        diffs = [abs(b - a) for a, b in zip(S, S[1:])]
        if S[-1] > 0 and all(d2 < d1 for d1, d2 in zip(diffs, diffs[1:])):
            print(C, " ".join(f"{s:.6f}" for s in S), " diffs", " ".join(f"{d:.2e}" for d in diffs))
            hits += 1
            if hits >= args.limit:
                break


if __name__ == "__main__":
    main()
