"""Time the compiled kernels against the pure-Python fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Prints one row per case with the best-of-N time for each backend and the
speedup.  Without a built extension only the Python column is filled.
"""
from __future__ import annotations

import argparse
import random
import timeit

import numpy as np

from cartan_lab import _kernels_py

try:
    from cartan_lab import _kernels
except ImportError:
    _kernels = None


def poly_cases(rng):
    for p, size in [(2, 64), (2, 1024), (2, 8192), (3, 1024), (65537, 512)]:
        a = tuple(rng.randrange(p) for _ in range(size))
        b = tuple(rng.randrange(p) for _ in range(size))
        yield f"poly_mul_mod p={p} len={size}", (lambda m, a=a, b=b, p=p: m.poly_mul_mod(a, b, p))


def jacobi_cases(rng):
    for n in (3, 6, 10, 20):
        x = rng.standard_normal((n, n))
        rows = ((x + x.T) / 2).tolist()
        yield f"jacobi_eigvalsh n={n}", (lambda m, rows=rows: m.jacobi_eigvalsh(rows, 1e-12, 100))


def best_of(fn, module, repeat):
    timer = timeit.Timer(lambda: fn(module))
    number, _ = timer.autorange()
    return min(timer.repeat(repeat, number)) / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    cases = list(poly_cases(random.Random(0))) + list(jacobi_cases(np.random.default_rng(0)))
    print(f"{'case':<34}{'python':>12}{'cython':>12}{'speedup':>10}")
    for name, fn in cases:
        py = best_of(fn, _kernels_py, args.repeat)
        if _kernels is None:
            print(f"{name:<34}{py * 1e3:>10.3f}ms{'-':>12}{'-':>10}")
            continue
        cy = best_of(fn, _kernels, args.repeat)
        print(f"{name:<34}{py * 1e3:>10.3f}ms{cy * 1e3:>10.3f}ms{py / cy:>9.1f}x")


if __name__ == "__main__":
    main()
