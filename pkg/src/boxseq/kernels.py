"""Integer hot loops, in a numba flavour and a pure-numpy flavour.

Everything here works on integer-scaled data (rationals multiplied by a
common denominator), so both flavours are exact as long as the int64
range is respected; callers check that with :func:`fits_int64` and fall
back to object arrays otherwise.

The numba flavour is used when numba imports and ``BOXSEQ_DISABLE_JIT``
is unset (or ``0``).  Both flavours are always importable under their
``*_numba`` / ``*_numpy`` names so they can be compared.
"""

from __future__ import annotations

import os
from itertools import islice
from math import comb

import numpy as np

ENV_FLAG = "BOXSEQ_DISABLE_JIT"

try:
    import numba
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get(ENV_FLAG, "0").lower() in ("", "0", "false", "no")

INT64_SAFE = 2**62
# largest square sign matrix whose Bareiss intermediates stay inside int64
MAX_SIGN_DIM = 14
_CHUNK = 1 << 15
# below this many enumeration steps numpy wins over a cold JIT compile
SMALL_WORK = 1 << 12


def fits_int64(max_abs_entry: int, max_terms: int) -> bool:
    return max_abs_entry * max(max_terms, 1) < INT64_SAFE


def _jit(fn):
    if not HAVE_NUMBA:
        return None
    return njit(cache=True)(fn)


# --------------------------------------------------------------------------
# multiplicity-pattern enumeration
# --------------------------------------------------------------------------

def _min_box_pattern_size_py(U, counts, bound):
    m, d = U.shape
    t = 0
    for j in range(m):
        t += counts[j]
    q = np.zeros(m, np.int64)
    s = np.zeros(d, np.int64)
    size = 0
    best = -1
    visited = 0
    while True:
        # advance the mixed-radix odometer
        j = m - 1
        while j >= 0 and q[j] == counts[j]:
            for c in range(d):
                s[c] -= q[j] * U[j, c]
            size -= q[j]
            q[j] = 0
            j -= 1
        if j < 0:
            break
        q[j] += 1
        size += 1
        for c in range(d):
            s[c] += U[j, c]
        visited += 1
        if size < 2 or size >= t:
            continue
        if best != -1 and size >= best:
            continue
        ok = True
        for c in range(d):
            if s[c] > bound or s[c] < -bound:
                ok = False
                break
        if ok:
            best = size
            if best == 2:
                break
    return best, visited


min_box_pattern_size_numba = _jit(_min_box_pattern_size_py)


def _decode_patterns(start, stop, counts):
    idx = np.arange(start, stop, dtype=np.int64)
    q = np.empty((idx.size, len(counts)), dtype=np.int64)
    for j in range(len(counts) - 1, -1, -1):
        base = counts[j] + 1
        q[:, j] = idx % base
        idx //= base
    return q


def min_box_pattern_size_numpy(U, counts, bound):
    counts = np.asarray(counts, dtype=np.int64)
    t = int(counts.sum())
    total = int(np.prod(counts + 1, dtype=object))
    best = -1
    for start in range(0, total, _CHUNK):
        stop = min(total, start + _CHUNK)
        q = _decode_patterns(start, stop, counts)
        sizes = q.sum(axis=1)
        sums = q.astype(U.dtype) @ U
        inside = np.all((sums <= bound) & (sums >= -bound), axis=1)
        hit = inside & (sizes >= 2) & (sizes < t)
        if hit.any():
            k = int(sizes[hit].min())
            best = k if best == -1 else min(best, k)
            if best == 2:
                break
    return best, total - 1


def min_box_pattern_size(U, counts, bound):
    """Smallest size ``2 <= k < t`` of a sub-multiset with sum inside
    ``[-bound, bound]^d``; -1 when there is none."""
    work = 1
    for c in counts:
        work *= int(c) + 1
    if USE_NUMBA and U.dtype == np.int64 and work > SMALL_WORK:
        best, _ = min_box_pattern_size_numba(U, np.asarray(counts, np.int64), np.int64(bound))
        return int(best)
    best, _ = min_box_pattern_size_numpy(U, counts, bound)
    return int(best)


def _kstar_first_hit_py(U, s, bound, h):
    m, d = U.shape
    q = np.zeros(m, np.int64)
    cur = s.copy()
    total = 0
    count = 0
    while True:
        j = m - 1
        # bounded-sum odometer: bump the last slot, carrying on overflow
        while j >= 0 and total == h:
            total -= q[j]
            for c in range(d):
                cur[c] += q[j] * U[j, c]
            q[j] = 0
            j -= 1
        if j < 0:
            return q, count, False
        q[j] += 1
        total += 1
        for c in range(d):
            cur[c] -= U[j, c]
        count += 1
        ok = True
        for c in range(d):
            if cur[c] > bound or cur[c] < -bound:
                ok = False
                break
        if ok:
            return q, count, True


kstar_first_hit_numba = _jit(_kstar_first_hit_py)


def bounded_compositions(m: int, h: int):
    """Nonnegative integer vectors of length m with 1 <= sum <= h.

    Same order as the odometer in the numba kernel.
    """
    q = [0] * m
    total = 0
    while True:
        j = m - 1
        while j >= 0 and total == h:
            total -= q[j]
            q[j] = 0
            j -= 1
        if j < 0:
            return
        q[j] += 1
        total += 1
        yield tuple(q)


def kstar_first_hit_numpy(U, s, bound, h):
    m = U.shape[0]
    gen = bounded_compositions(m, h)
    count = 0
    while True:
        block = list(islice(gen, _CHUNK))
        if not block:
            return np.zeros(m, np.int64), count, False
        q = np.array(block, dtype=np.int64)
        rest = s[None, :] - q.astype(U.dtype) @ U
        inside = np.all((rest <= bound) & (rest >= -bound), axis=1)
        if inside.any():
            k = int(np.argmax(inside))
            return q[k], count + k + 1, True
        count += len(block)


def kstar_first_hit(U, s, bound, h):
    """First multiplicity vector q (1 <= sum q <= h) with ``s - qU`` in the box."""
    if USE_NUMBA and U.dtype == np.int64 and comb(U.shape[0] + int(h), int(h)) > SMALL_WORK:
        q, count, found = kstar_first_hit_numba(U, s.astype(np.int64), np.int64(bound), np.int64(h))
    else:
        q, count, found = kstar_first_hit_numpy(U, s, bound, h)
    return (tuple(int(x) for x in q) if found else None), int(count)


# --------------------------------------------------------------------------
# sign-matrix scoring
# --------------------------------------------------------------------------

def _det_i64_py(M):
    n = M.shape[0]
    if n == 0:
        return 1
    a = M.copy()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            p = -1
            for r in range(k + 1, n):
                if a[r, k] != 0:
                    p = r
                    break
            if p < 0:
                return 0
            for c in range(n):
                tmp = a[k, c]
                a[k, c] = a[p, c]
                a[p, c] = tmp
            sign = -sign
        akk = a[k, k]
        for i in range(k + 1, n):
            aik = a[i, k]
            for j in range(k + 1, n):
                a[i, j] = (a[i, j] * akk - aik * a[k, j]) // prev
        prev = akk
    return sign * a[n - 1, n - 1]


if HAVE_NUMBA:
    _det_i64_numba = njit(cache=True)(_det_i64_py)

    @njit(cache=True)
    def _gcd_i64(a, b):
        a = abs(a)
        b = abs(b)
        while b:
            a, b = b, a % b
        return a

    @njit(cache=True)
    def _rect_l1_batch_numba(mats):
        nb, d, c = mats.shape
        out = np.zeros(nb, np.int64)
        minor = np.empty((d, d), np.int64)
        z = np.empty(c, np.int64)
        for b in range(nb):
            g = 0
            for j in range(c):
                for r in range(d):
                    k = 0
                    for cc in range(c):
                        if cc != j:
                            minor[r, k] = mats[b, r, cc]
                            k += 1
                z[j] = _det_i64_numba(minor)
                g = _gcd_i64(g, z[j])
            if g == 0:
                out[b] = 0
                continue
            tot = 0
            for j in range(c):
                tot += abs(z[j]) // g
            out[b] = tot
        return out

    @njit(cache=True)
    def _square_score_batch_numba(mats, scale):
        nb, d, _ = mats.shape
        out = np.empty(nb, np.int64)
        minor = np.empty((d - 1, d - 1), np.int64)
        adj = np.empty((d, d), np.int64)
        for b in range(nb):
            det = _det_i64_numba(mats[b].copy())
            if det == 0:
                out[b] = -1
                continue
            if d == 1:
                adj[0, 0] = 1
            else:
                for i in range(d):
                    for j in range(d):
                        # adj[i, j] = (-1)^(i+j) * minor(j, i)
                        rr = 0
                        for r in range(d):
                            if r == j:
                                continue
                            cc = 0
                            for c in range(d):
                                if c == i:
                                    continue
                                minor[rr, cc] = mats[b, r, c]
                                cc += 1
                            rr += 1
                        v = _det_i64_numba(minor)
                        adj[i, j] = -v if (i + j) % 2 else v
            integral = True
            best = -1
            for c in range(d):
                lo = -1
                for i in range(d):
                    num = scale * adj[i, c]
                    if num % det != 0:
                        integral = False
                        break
                    v = abs(num // det)
                    if lo == -1 or v < lo:
                        lo = v
                if not integral:
                    break
                if lo > best:
                    best = lo
            out[b] = best if integral else -1
        return out

    def det_batch_numba(mats):
        return np.array([_det_i64_numba(m.copy()) for m in mats], dtype=np.int64)

    def rect_l1_batch_numba(mats):
        return _rect_l1_batch_numba(np.ascontiguousarray(mats, dtype=np.int64))

    def square_score_batch_numba(mats, scale):
        return _square_score_batch_numba(np.ascontiguousarray(mats, dtype=np.int64), np.int64(scale))
else:  # pragma: no cover
    det_batch_numba = rect_l1_batch_numba = square_score_batch_numba = None


def det_batch_numpy(mats):
    """Bareiss determinants of a stack of integer matrices, vectorized over the stack."""
    a = np.array(mats, dtype=np.int64, copy=True)
    nb, n, _ = a.shape
    if n == 0:
        return np.ones(nb, np.int64)
    idx = np.arange(nb)
    sign = np.ones(nb, np.int64)
    prev = np.ones(nb, np.int64)
    dead = np.zeros(nb, bool)
    for k in range(n - 1):
        nz = a[:, k:, k] != 0
        has = nz.any(axis=1)
        dead |= ~has
        p = k + np.argmax(nz, axis=1)
        swap = has & (p != k)
        if swap.any():
            rows_k = a[idx, k].copy()
            rows_p = a[idx, p].copy()
            a[idx, k] = np.where(swap[:, None], rows_p, rows_k)
            a[idx, p] = np.where(swap[:, None], rows_k, rows_p)
            sign = np.where(swap, -sign, sign)
        akk = np.where(has, a[:, k, k], 1)
        with np.errstate(over="ignore"):
            a[:, k + 1:, k + 1:] = (
                a[:, k + 1:, k + 1:] * akk[:, None, None]
                - a[:, k + 1:, k:k + 1] * a[:, k:k + 1, k + 1:]
            ) // prev[:, None, None]
        prev = akk
    return np.where(dead, 0, sign * a[:, n - 1, n - 1])


def rect_l1_batch_numpy(mats):
    mats = np.asarray(mats, dtype=np.int64)
    nb, d, c = mats.shape
    z = np.stack(
        [(-1) ** j * det_batch_numpy(np.delete(mats, j, axis=2)) for j in range(c)], axis=1
    )
    g = np.gcd.reduce(np.abs(z), axis=1)
    safe = np.where(g == 0, 1, g)
    return np.where(g == 0, 0, (np.abs(z) // safe[:, None]).sum(axis=1))


def square_score_batch_numpy(mats, scale):
    mats = np.asarray(mats, dtype=np.int64)
    nb, d, _ = mats.shape
    det = det_batch_numpy(mats)
    adj = np.empty((nb, d, d), np.int64)
    if d == 1:
        adj[:, 0, 0] = 1
    else:
        for i in range(d):
            for j in range(d):
                minor = np.delete(np.delete(mats, j, axis=1), i, axis=2)
                adj[:, i, j] = (-1) ** (i + j) * det_batch_numpy(minor)
    safe = np.where(det == 0, 1, det)[:, None, None]
    num = scale * adj
    integral = np.all(num % safe == 0, axis=(1, 2)) & (det != 0)
    B = np.abs(num // safe)
    score = B.min(axis=1).max(axis=1)
    return np.where(integral, score, -1)


def rect_l1_batch(mats):
    """Primitive-kernel L1 norm of each d x (d+1) matrix (0 if rank-deficient)."""
    if USE_NUMBA:
        return rect_l1_batch_numba(mats)
    return rect_l1_batch_numpy(mats)


def square_score_batch(mats, scale):
    """Best-column minimum |(scale * A^-1)_ij| per matrix; -1 if singular or non-integral."""
    if USE_NUMBA:
        return square_score_batch_numba(mats, scale)
    return square_score_batch_numpy(mats, scale)


def det_batch(mats):
    if USE_NUMBA:
        return det_batch_numba(mats)
    return det_batch_numpy(mats)


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
