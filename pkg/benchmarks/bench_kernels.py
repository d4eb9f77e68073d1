"""Compiled vs pure-Python kernels.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends must return identical results; the script checks that before timing.
"""

import argparse
import time

from ternclass import _pykernels, kernels

try:
    from ternclass import _ckernels
except ImportError:
    _ckernels = None

ENUM_CASES = [
    # (a, b, c, f, e, h, bound)
    (1, 1, 1, 0, 0, 0, 400),
    (2, 2, 295, -1, -1, 0, 2000),
    (3, 4, 5, 1, 1, 1, 3000),
]
DISCS = [500, 2000, 6000]


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled kernels not built; only the Python backend is available")
        return
    print(f"selected backend: {kernels.BACKEND}")
    print(f"{'kernel':<46}{'python s':>10}{'cython s':>10}{'speedup':>9}")
    for a, b, c, f, e, h, bound in ENUM_CASES:
        zargs = (a, b, c, f, e, h, bound, -10 ** 6, 10 ** 6)
        assert sorted(_pykernels.enum_vectors(*zargs)) == sorted(_ckernels.enum_vectors(*zargs))
        tp = best_of(lambda: _pykernels.enum_vectors(*zargs), args.repeat)
        tc = best_of(lambda: _ckernels.enum_vectors(*zargs), args.repeat)
        print(f"{'enum_vectors ' + str((a, b, c, f, e, h)) + ' <= ' + str(bound):<46}{tp:>10.4f}{tc:>10.4f}"
              f"{tp / tc:>8.1f}x")
    for d in DISCS:
        assert sorted(_pykernels.reduced_candidates(d)) == sorted(_ckernels.reduced_candidates(d))
        tp = best_of(lambda: _pykernels.reduced_candidates(d), args.repeat)
        tc = best_of(lambda: _ckernels.reduced_candidates(d), args.repeat)
        print(f"{'reduced_candidates d=' + str(d):<46}{tp:>10.4f}{tc:>10.4f}{tp / tc:>8.1f}x")


if __name__ == "__main__":
    main()
