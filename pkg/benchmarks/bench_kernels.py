"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py --size 1024 --repeat 3
"""

import argparse
import time

import numpy as np

from sarfocus import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=1024, help="square raster edge")
    ap.add_argument("--taps", type=int, default=8, choices=[4, 8, 16])
    ap.add_argument("--window", type=int, default=6, help="median window edge")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    n = args.size
    src = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    pos = np.arange(n)[None, :] + rng.uniform(-20, 20, size=(n, 1))
    img = rng.rayleigh(size=(n + args.window - 1, n + args.window - 1))

    cases = {
        f"resample_rows {n}x{n} taps={args.taps}":
            lambda b: kernels.resample_rows(src, pos, taps=args.taps, backend=b),
        f"median_filter {n}x{n} {args.window}x{args.window}":
            lambda b: kernels.median_filter(img, args.window, args.window, backend=b),
    }
    print(f"default backend: {kernels.BACKEND}; threads: {kernels.num_threads()}")
    print(f"{'kernel':40s} {'backend':8s} {'seconds':>9s} {'speedup':>8s}")
    for name, fn in cases.items():
        ref = best_of(lambda: fn("python"), args.repeat)
        print(f"{name:40s} {'python':8s} {ref:9.3f} {1.0:8.2f}")
        if "cython" in kernels.BACKENDS:
            out_c, out_p = fn("cython"), fn("python")
            same = np.array_equal(out_c, out_p)
            t = best_of(lambda: fn("cython"), args.repeat)
            print(f"{name:40s} {'cython':8s} {t:9.3f} {ref / t:8.2f}  identical={same}")


if __name__ == "__main__":
    main()
