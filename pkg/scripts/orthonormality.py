"""Gram matrix of the automorphic modes under the Klein-Gordon product."""
import argparse
import math
import time

import numpy as np

from tmqft.geometry import WarpConfig
from tmqft.tm_modes import gram_matrix


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n-abs", type=int, default=5, help="modes |n| <= n_abs")
    p.add_argument("--A", type=float, action="append", help="warp values (default 1.1, e, 10)")
    p.add_argument("--L", type=float, default=1.0)
    args = p.parse_args(argv)

    idx = range(-args.n_abs, args.n_abs + 1)
    for A in args.A or (1.1, math.e, 10.0):
        t0 = time.perf_counter()
        G = gram_matrix(idx, WarpConfig(A, args.L))
        err = np.abs(G - np.eye(len(idx)))
        print(f"A = {A:.6g}: max|G - I| = {err.max():.2e}, max diagonal error {np.diag(err).max():.2e}, "
              f"{time.perf_counter() - t0:.2f} s")


if __name__ == "__main__":
    main()
