"""Time the numba loop kernels against their numpy counterparts.

    python benchmarks/bench_kernels.py [--sizes 64 256 1024] [--repeat 5]

Each kernel is called once before timing so numba compilation is excluded.
Reported times are the best of ``--repeat`` runs, in milliseconds.
"""

import argparse
import time

import numpy as np

from seqspace import _kernels as K


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return 1e3 * min(times)


def cases(n, rng):
    s = rng.uniform(-1.0, 1.0, n) * 0.5 ** np.arange(n)
    s[0] = 2.0
    r = rng.uniform(0.5, 2.0, n)
    t = rng.uniform(0.5, 2.0, n)
    x = rng.uniform(-1.0, 1.0, n)
    alt = K.alt_dcoeffs_np(s, n)
    amat = rng.uniform(-1.0, 1.0, (n, n))
    absy = np.abs(x)
    p = rng.uniform(1.1, 3.0, n)
    yield "alt_dcoeffs", (s, n)
    yield "forward", (s, t, 1.0 / r, x)
    yield "inverse", (alt, r, t, x)
    yield "inverse_matrix", (alt, r, t, n)
    yield "e_rows", (amat, alt, 2.0, r, t)
    yield "luxemburg", (absy, p, 1e-12, 64)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--subset-rows", type=int, default=13,
                        help="rows for the exhaustive subset search (2^rows subsets)")
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    print(f"{'kernel':<16}{'N':>6}{'numba ms':>12}{'numpy ms':>12}{'speedup':>9}")
    for n in args.sizes:
        for name, call_args in cases(n, rng):
            jit = getattr(K, f"{name}_loops")
            vec = getattr(K, f"{name}_np")
            t_jit = best_of(lambda: jit(*call_args), args.repeat)
            t_vec = best_of(lambda: vec(*call_args), args.repeat)
            print(f"{name:<16}{n:>6}{t_jit:>12.3f}{t_vec:>12.3f}{t_vec / t_jit:>9.1f}")

    b = rng.uniform(-1.0, 1.0, (args.subset_rows, 8))
    expo = rng.uniform(0.5, 3.0, 8)
    t_jit = best_of(lambda: K.subset_max_loops(b, expo), args.repeat)
    t_vec = best_of(lambda: K.subset_max_np(b, expo), args.repeat)
    print(f"{'subset_max':<16}{args.subset_rows:>6}{t_jit:>12.3f}{t_vec:>12.3f}{t_vec / t_jit:>9.1f}")


if __name__ == "__main__":
    main()
