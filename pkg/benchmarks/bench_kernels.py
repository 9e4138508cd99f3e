"""Time each int64 kernel under numba and under the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N] [--quick]

Each case is run once to warm up (and to compile under numba), then timed
as the best of ``--repeat`` runs. Results of both implementations are
compared before timing.
"""

import argparse
import time

import numpy as np

from mntgen import _kernels
from mntgen.arith import primes_up_to
from mntgen.families import Family
from mntgen.intpoly import LinPoly
from mntgen.stats import _desc, delta_poly


def cases(quick):
    fam = Family.from_trace(6, 4, LinPoly(-7, -1))
    q, r, d = _desc(fam.q), _desc(fam.r), _desc(delta_poly(fam))
    primes = primes_up_to(1000)
    p = 409 if quick else 1021
    m = 221 if quick else 1001
    m_hi = 200_000 if quick else 2_000_000
    n_seeds = 100_000 if quick else 1_000_000
    return [
        (f"cp_count p={p}", lambda impl: _kernels.cp_count(q, r, d, p, impl=impl)),
        (f"rho_count m={m}", lambda impl: _kernels.rho_count(q, r, d, m, [pp for pp in (7, 11, 13) if m % pp == 0], impl=impl)),
        (f"square_hits g=163 m<={m_hi}", lambda impl: _kernels.square_hits(163, -200, 200, 0, m_hi, impl=impl)),
        (
            "square_hits wide g=181",
            lambda impl: _kernels.square_hits(181, -200, 200, 10**9, 10**9 + m_hi // 10, impl=impl),
        ),
        ("strip_small_primes x2000", lambda impl: [
            _kernels.strip_small_primes(n, primes, impl=impl) for n in range(10**15, 10**15 + 2000)
        ]),
        (f"sieve_hits {n_seeds} seeds", lambda impl: _kernels.sieve_hits(_desc(fam.q), -n_seeds // 2, n_seeds, primes, impl=impl)),
    ]


def same(a, b):
    if isinstance(a, tuple) and a and isinstance(a[0], np.ndarray):
        return all(np.array_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--quick", action="store_true", help="smaller inputs")
    args = parser.parse_args()

    impls = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    print(f"{'kernel':36} " + " ".join(f"{i:>10}" for i in impls) + "   speedup")
    for name, run in cases(args.quick):
        results = {impl: run(impl) for impl in impls}  # warm-up and compile
        if len(impls) == 2 and not same(results["numpy"], results["numba"]):
            raise SystemExit(f"{name}: implementations disagree")
        t = {impl: best_of(lambda: run(impl), args.repeat) for impl in impls}
        speed = f"{t['numpy'] / t['numba']:8.1f}x" if "numba" in t else ""
        print(f"{name:36} " + " ".join(f"{t[i]:9.4f}s" for i in impls) + f"  {speed}")


if __name__ == "__main__":
    main()
