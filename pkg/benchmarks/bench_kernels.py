"""Time the njit loop kernels against the numpy kernels.

Both implementations are called directly, so one run compares them without
touching FREESTATES_DISABLE_NUMBA.  The first njit call of each kernel is
made before timing to keep compilation out of the numbers.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from freestates import kernels as K
from freestates import words as W


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    ball = W.ball(2, 4)
    codes, lengths = W.words_to_codes(ball)
    sphere = W.sphere_array(3, 7)
    sphere_len = np.full(sphere.shape[0], 7, dtype=np.int64)
    rng = np.random.default_rng(0)
    sym = rng.normal(size=(120, 120))
    sym = sym + sym.T
    cyl = W.sphere_array(2, 9)
    s = np.array([1, -2, -2, 1, 2], dtype=K.CODE_DTYPE)
    return [
        ("sphere_codes n=3 k=8", K._sphere_codes_loops, K._sphere_codes_numpy, (3, 8)),
        ("word_stats 3-sphere k=7", K._word_stats_loops, K._word_stats_numpy, (sphere, sphere_len)),
        (f"pair_stats ball(2,4) m={len(ball)}", K._pair_stats_loops, K._pair_stats_numpy, (codes, lengths)),
        ("jacobi 120x120", K._jacobi_loops, K._jacobi_numpy, (sym, 1e-14, 100)),
        ("cylinder_masses n=2 d=9", K._cylinder_masses_loops, K._cylinder_masses_numpy, (cyl, 0.1, 0.4, 0.25, 0.5)),
        ("cocycle |s|=5 d=9", K._cocycle_loops, K._cocycle_numpy, (s, cyl, 2, 1.1)),
    ]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':<34}{'njit (s)':>12}{'numpy (s)':>12}{'speedup':>10}")
    for name, loops, vec, fargs in cases():
        loops(*fargs)  # compile
        t_loop = best_of(lambda: loops(*fargs), args.repeat)
        t_vec = best_of(lambda: vec(*fargs), args.repeat)
        print(f"{name:<34}{t_loop:>12.5f}{t_vec:>12.5f}{t_vec / t_loop:>9.1f}x")


if __name__ == "__main__":
    main()
