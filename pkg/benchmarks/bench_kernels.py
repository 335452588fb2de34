"""Compare the compiled and pure-Python kernels.

Usage::

    python benchmarks/bench_kernels.py [--steps 1000000] [--repeat 3]
"""

import argparse
import timeit

import numpy as np

from solar_markov import _kernels_py
from solar_markov.markov import cumulative_rows

try:
    from solar_markov import _kernels
except ImportError:  # extension not built
    _kernels = None


def workload(steps, seed=0):
    rng = np.random.default_rng(seed)
    codes = rng.integers(1, 5, steps).astype(np.int64)
    mats = rng.random((5, 4, 4))
    mats /= mats.sum(axis=2, keepdims=True)
    cum = cumulative_rows(list(mats))
    seg = np.sort(rng.integers(0, 5, steps - 1)).astype(np.intp)
    u = rng.random(steps - 1)
    return codes, cum, seg, u


def bench(backend, codes, cum, seg, u, repeat):
    count = min(timeit.repeat(lambda: backend.count_pairs(codes, 0, len(codes)), number=1, repeat=repeat))
    sample = min(timeit.repeat(lambda: backend.sample_path(cum, seg, u, 1), number=1, repeat=repeat))
    return count, sample


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--steps", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    data = workload(args.steps)
    backends = {"python": _kernels_py}
    if _kernels is not None:
        backends["cython"] = _kernels
    else:
        print("compiled extension not built; timing the pure-Python kernels only")

    results = {name: bench(mod, *data, args.repeat) for name, mod in backends.items()}
    print(f"{'backend':<8} {'count_pairs':>14} {'sample_path':>14}   ({args.steps:,} steps, best of {args.repeat})")
    for name, (c, s) in results.items():
        print(f"{name:<8} {c * 1e3:>11.2f} ms {s * 1e3:>11.2f} ms")
    if "cython" in results:
        (cp, sp), (cc, sc) = results["python"], results["cython"]
        print(f"speed-up  {cp / cc:>12.1f}x {sp / sc:>12.1f}x")
        a = _kernels_py.sample_path(*data[1:], 1)
        b = _kernels.sample_path(*data[1:], 1)
        assert np.array_equal(np.asarray(a), np.asarray(b)), "backends disagree"


if __name__ == "__main__":
    main()
