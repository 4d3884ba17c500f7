"""Compare the compiled and numpy box-bound kernels on level-0 boxes.

    python benchmarks/bench_kernels.py [--eps 0.01] [--repeat 3]
"""

import argparse
import time

import numpy as np

from homlab import kernels
from homlab.certify import Lattice


def level0_boxes(eps):
    lat = Lattice.build(eps, eps)
    J = lat.root_boxes()
    J = J[lat.admissible(J, lat.width(0))]
    return lat.corners(J, lat.width(0))


def best_of(fn, a, b, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out, _ = fn(a, b)
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--eps", type=float, default=0.01)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    a, b = level0_boxes(args.eps)
    print(f"{len(a)} admissible boxes at eps={args.eps}")
    t_py, out_py = best_of(kernels.python_box_bounds, a, b, args.repeat)
    print(f"numpy   : {t_py:.3f} s  ({1e9 * t_py / len(a):.0f} ns/box)")
    if kernels.compiled_box_bounds is None:
        print("cython  : extension not built")
        return
    t_c, out_c = best_of(kernels.compiled_box_bounds, a, b, args.repeat)
    print(f"cython  : {t_c:.3f} s  ({1e9 * t_c / len(a):.0f} ns/box)")
    print(f"speedup : {t_py / t_c:.2f}x; max |difference| = {np.abs(out_c - out_py).max():.3g}")


if __name__ == "__main__":
    main()
