"""Time each enumeration kernel under the compiled and the numpy backend.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--n 18]
"""
import argparse
import timeit

import numpy as np

from hsmeasure.kernels import HAS_CYTHON, get_backend


def cases(n, rng):
    re, im = rng.standard_normal(n), rng.standard_normal(n)
    thr = np.sort(rng.uniform(0, 3, 64))
    phi = rng.standard_normal((n, 3))
    x = rng.standard_normal((6, n))
    return {
        "sign_moment p=4": lambda k: k.sign_moment(re, im, 4.0),
        "sign_moment p=1.5": lambda k: k.sign_moment(re, im, 1.5),
        "sign_tail_counts": lambda k: k.sign_tail_counts(re, thr),
        "max_sign_norm": lambda k: k.max_sign_norm(phi),
        "max_subset_modulus": lambda k: k.max_subset_modulus(re, im),
        "max_sign_l1": lambda k: k.max_sign_l1(x),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=18, help="number of coefficients / atoms")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = ["python"] + (["cython"] if HAS_CYTHON else [])
    if not HAS_CYTHON:
        print("compiled extension not built; timing the numpy backend only")
    rng = np.random.default_rng(0)
    print(f"n = {args.n}, best of {args.repeat}")
    print(f"{'kernel':<22}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if HAS_CYTHON else ""))
    for name, fn in cases(args.n, rng).items():
        times = []
        for b in backends:
            k = get_backend(b)
            times.append(min(timeit.repeat(lambda: fn(k), number=1, repeat=args.repeat)))
        row = f"{name:<22}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
        if HAS_CYTHON:
            row += f"{times[0] / times[1]:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
