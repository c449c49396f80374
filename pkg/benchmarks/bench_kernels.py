"""Compare the numba and numpy backends of the enumeration kernels.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Times the idempotent-matrix search for several (r, max_entry) sizes, and
a batched check over random matrices.  The first numba call per kernel
includes compilation and is reported separately.
"""
import argparse
import time

import numpy as np

from retractlab import _kernels

SIZES = [(2, 3), (2, 7), (3, 2), (3, 3), (3, 4)]


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    have_numba = _kernels.njit is not None
    if have_numba:
        t0 = time.perf_counter()
        _kernels.idempotent_matrices(2, 1, backend="numba")
        _kernels.batch_idempotent(np.eye(2, dtype=np.int64)[None], backend="numba")
        print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.2f}s")
    else:
        print("numba not installed; numpy only")

    print(f"{'kernel':<22}{'size':>10}{'count':>8}{'numpy s':>10}{'numba s':>10}{'speedup':>9}")
    for r, M in SIZES:
        t_np, a = best_of(lambda: _kernels.idempotent_matrices(r, M, backend="numpy"), args.repeat)
        row = f"{'idempotent_matrices':<22}{f'r={r},M={M}':>10}{len(a):>8}{t_np:>10.4f}"
        if have_numba:
            t_nb, b = best_of(lambda: _kernels.idempotent_matrices(r, M, backend="numba"), args.repeat)
            assert np.array_equal(a, b)
            row += f"{t_nb:>10.4f}{t_np / t_nb:>8.1f}x"
        print(row)

    rng = np.random.default_rng(0)
    for count in (10_000, 1_000_000):
        mats = rng.integers(0, 2, size=(count, 3, 3))
        t_np, a = best_of(lambda: _kernels.batch_idempotent(mats, backend="numpy"), args.repeat)
        row = f"{'batch_idempotent':<22}{'3x3':>10}{count:>8}{t_np:>10.4f}"
        if have_numba:
            t_nb, b = best_of(lambda: _kernels.batch_idempotent(mats, backend="numba"), args.repeat)
            assert np.array_equal(a, b)
            row += f"{t_nb:>10.4f}{t_np / t_nb:>8.1f}x"
        print(row)


if __name__ == "__main__":
    main()
