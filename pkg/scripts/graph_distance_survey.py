#!/usr/bin/env python3
"""Graph distance versus cell norm on random lattices.

For each sampled lattice, BFS computes the exact path distance between the
origin and every coefficient vector in a small box, and the script reports
how the ratio 2 d_G / ||x - y||_V spreads inside its guaranteed range
[1, n] (1 is hit by adjacent pairs, n by axis-aligned diagonals on Z^n).

Example:
    python scripts/graph_distance_survey.py -n 3 --lattices 5 --box 2
"""

import argparse
import sys
from itertools import product

import numpy as np

from voronoi_cvp import (
    LatticeBasis,
    LatticePoint,
    compute_relevant_vectors,
    graph_distance_bfs,
    voronoi_norm,
)
from voronoi_cvp.lattice import random_rational_basis


def survey(basis, cap, box):
    cell = compute_relevant_vectors(basis)
    n = basis.n
    origin = LatticePoint.origin(n)
    ratios = []
    capped = 0
    for coeffs in product(range(-box, box + 1), repeat=n):
        if not any(coeffs):
            continue
        y = LatticePoint.from_coeffs(basis, coeffs)
        d = graph_distance_bfs(cell, origin, y, cap=cap)
        if d is None:
            capped += 1
            continue
        vn = voronoi_norm(cell, y.ambient)
        assert 2 * d >= vn and 2 * d <= n * vn
        ratios.append(2 * d / float(vn))
    return ratios, capped, len(cell.vectors)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-n", "--dimension", type=int, default=3)
    ap.add_argument("--lattices", type=int, default=5)
    ap.add_argument("--box", type=int, default=1)
    ap.add_argument("--cap", type=int, default=12)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.Generator(np.random.PCG64(args.seed))
    n = args.dimension
    print(f"{'lattice':<10} {'|VR|':>5} {'pairs':>6} {'ratio min':>10} {'mean':>7} {'max':>7} {'capped':>7}")
    for name, basis in [("Z^%d" % n, LatticeBasis.identity(n))] + [
        (f"rand-{i}", random_rational_basis(n, rng)) for i in range(args.lattices)
    ]:
        ratios, capped, vr = survey(basis, args.cap, args.box)
        print(
            f"{name:<10} {vr:>5} {len(ratios):>6} {min(ratios):>10.3f} "
            f"{sum(ratios)/len(ratios):>7.3f} {max(ratios):>7.3f} {capped:>7}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
