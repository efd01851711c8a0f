"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Both backends are called directly, so the BOXSEQ_DISABLE_JIT flag does
not matter here.  The first numba call (compilation) is excluded.
"""

import argparse
import time

import numpy as np

from boxseq import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(rng):
    # multiplicity patterns: 12 distinct vectors in dim 4, counts 1..3 (~2e6 patterns)
    U = rng.integers(-60, 61, size=(12, 4)).astype(np.int64)
    counts = rng.integers(1, 4, size=12).astype(np.int64)
    yield ("min_box_pattern_size", f"m=12 d=4 patterns={int(np.prod(counts + 1))}",
           lambda: kernels.min_box_pattern_size_numba(U, counts, np.int64(1)),
           lambda: kernels.min_box_pattern_size_numpy(U, counts, 1))

    V = rng.integers(-60, 61, size=(8, 6)).astype(np.int64)
    s = np.full(6, 10**6, np.int64)  # out of reach: full enumeration
    yield ("kstar_first_hit", "m=8 d=6 h=10 (no hit)",
           lambda: kernels.kstar_first_hit_numba(V, s, np.int64(1), np.int64(10)),
           lambda: kernels.kstar_first_hit_numpy(V, s, 1, 10))

    for d in (4, 8):
        sq = rng.choice(np.array([-1, 1], np.int64), size=(20000, d, d))
        yield ("square_score_batch", f"20000 x {d}x{d}",
               lambda sq=sq, d=d: kernels._square_score_batch_numba(sq, np.int64(2**d)),
               lambda sq=sq, d=d: kernels.square_score_batch_numpy(sq, 2**d))
        rect = rng.choice(np.array([-1, 1], np.int64), size=(20000, d, d + 1))
        yield ("rect_l1_batch", f"20000 x {d}x{d + 1}",
               lambda rect=rect: kernels._rect_l1_batch_numba(rect),
               lambda rect=rect: kernels.rect_l1_batch_numpy(rect))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if not kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<22} {'case':<28} {'numba s':>10} {'numpy s':>10} {'speedup':>8}")
    for name, label, fast, slow in cases(rng):
        fast()  # compile
        t_fast, a = best_of(fast, args.repeat)
        t_slow, b = best_of(slow, args.repeat)
        same = _same(a, b)
        print(f"{name:<22} {label:<28} {t_fast:>10.4f} {t_slow:>10.4f} {t_slow / t_fast:>7.1f}x"
              + ("" if same else "  MISMATCH"))


def _same(a, b):
    if isinstance(a, tuple):
        # (value, visited) or (q, count, found): compare the answer part
        if len(a) == 3:
            return bool(a[2]) == bool(b[2]) and (not a[2] or list(a[0]) == list(b[0]))
        return a[0] == b[0]
    return np.array_equal(a, b)


if __name__ == "__main__":
    main()
