"""Seeded random instances used by the tests, the benchmark and the CLI."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .box import VectorSequence


def _repair(rows, q, target_lo, target_hi):
    """Shift coordinates (staying in [-q, q]) until each column sum is in [lo, hi]."""
    for c in range(rows.shape[1]):
        s = int(rows[:, c].sum())
        for i in range(rows.shape[0]):
            if s > target_hi:
                r = min(s - target_hi, int(rows[i, c]) + q)
                rows[i, c] -= r
                s -= r
            elif s < target_lo:
                r = min(target_lo - s, q - int(rows[i, c]))
                rows[i, c] += r
                s += r
    return rows


def random_box_sequence(rng: np.random.Generator, d: int, t: int, max_den: int = 64,
                        zero_sum: bool = False) -> VectorSequence:
    """t vectors in [-1,1]^d with a common denominator <= max_den whose sum
    lies in the box (or is exactly zero)."""
    q = int(rng.integers(1, max_den + 1))
    rows = rng.integers(-q, q + 1, size=(t, d))
    order = rng.permutation(t)
    rows = rows[order]
    bound = 0 if zero_sum else q
    rows = _repair(rows, q, -bound, bound)
    rows = rows[np.argsort(order)]
    vecs = [tuple(Fraction(int(x), q) for x in r) for r in rows]
    return VectorSequence(d, vecs, {"kind": "random", "zero_sum": zero_sum, "den": q})


def random_pair_instance(rng: np.random.Generator, t: int, max_den: int = 64) -> VectorSequence:
    """Rejection-sampled t vectors in [-1,1]^2 with per-entry denominators <= max_den
    and sum in the box."""
    while True:
        dens = rng.integers(1, max_den + 1, size=(t, 2))
        nums = rng.integers(-dens, dens + 1)
        vecs = [tuple(Fraction(int(n), int(q)) for n, q in zip(nr, dr)) for nr, dr in zip(nums, dens)]
        s0 = sum(v[0] for v in vecs)
        s1 = sum(v[1] for v in vecs)
        if -1 <= s0 <= 1 and -1 <= s1 <= 1:
            return VectorSequence(2, vecs, {"kind": "random"})
