"""Vectors, sequences and the box [-1,1]^d, plus the exhaustive verifiers.

A sequence is *minimal* when its sum lies in the box but no proper
subsequence with at least two terms does.  The verifiers here decide that
exactly, grouping identical vectors so that only multiplicity patterns are
enumerated.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, lcm
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .exact import format_rat, parse_rat

QVector = tuple  # tuple[Fraction, ...]

DEFAULT_SUBSET_LIMIT = 26
DEFAULT_KSTAR_BUDGET = 10**7


class BudgetExceeded(RuntimeError):
    """An exhaustive search would exceed its explicit budget."""


@dataclass
class VectorSequence:
    dim: int
    vectors: list
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.vectors = [tuple(Fraction(c) for c in v) for v in self.vectors]
        for v in self.vectors:
            if len(v) != self.dim:
                raise ValueError(f"vector of length {len(v)} in a dim-{self.dim} sequence")
        if self.meta.get("all_pm1"):
            for v in self.vectors:
                if any(abs(c) != 1 for c in v):
                    raise ValueError("meta declares a ±1 sequence but an entry is not ±1")

    def __len__(self):
        return len(self.vectors)

    @property
    def t(self) -> int:
        return len(self.vectors)

    def total(self) -> QVector:
        return subseq_sum(self, range(self.t))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "vectors": [[format_rat(c) for c in v] for v in self.vectors],
            "meta": self.meta,
        }

    @classmethod
    def from_dict(cls, data) -> "VectorSequence":
        if not isinstance(data, dict) or "dim" not in data or "vectors" not in data:
            raise ValueError("sequence JSON needs 'dim' and 'vectors'")
        dim = data["dim"]
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise ValueError(f"bad dim {dim!r}")
        vectors = data["vectors"]
        if not isinstance(vectors, list):
            raise ValueError("'vectors' must be a list")
        vecs = []
        for v in vectors:
            if not isinstance(v, list):
                raise ValueError("each vector must be a list")
            vecs.append(tuple(parse_rat(c) for c in v))
        meta = data.get("meta", {})
        if not isinstance(meta, dict):
            raise ValueError("'meta' must be an object")
        return cls(dim, vecs, dict(meta))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "VectorSequence":
        return cls.from_dict(json.loads(text))


@dataclass
class VerificationReport:
    kind: str  # tau_witness | min_subset | kstar | sum_check
    passed: bool
    witness: list | None = None
    min_size: int | None = None
    details: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "witness": self.witness,
            "min_size": self.min_size,
            "details": self.details,
        }

    @classmethod
    def from_dict(cls, data) -> "VerificationReport":
        return cls(data["kind"], data["passed"], data.get("witness"),
                   data.get("min_size"), data.get("details", ""))


def in_box(v: Iterable) -> bool:
    return all(-1 <= c <= 1 for c in v)


def max_norm(v: Iterable) -> Fraction:
    return max((abs(Fraction(c)) for c in v), default=Fraction(0))


def subseq_sum(seq: VectorSequence, S: Iterable[int]) -> QVector:
    acc = [Fraction(0)] * seq.dim
    for i in S:
        if not 0 <= i < seq.t:
            raise IndexError(f"index {i} out of range for t={seq.t}")
        for c, x in enumerate(seq.vectors[i]):
            acc[c] += x
    return tuple(acc)


def group_identical(vectors: Sequence) -> tuple[list, list[list[int]]]:
    """Distinct vectors in first-occurrence order and the indices of each group."""
    where: dict = {}
    distinct: list = []
    members: list[list[int]] = []
    for i, v in enumerate(vectors):
        g = where.get(v)
        if g is None:
            g = where[v] = len(distinct)
            distinct.append(v)
            members.append([])
        members[g].append(i)
    return distinct, members


def scale_to_int(vectors: Sequence, extra: Sequence = ()):
    """Multiply by a common denominator D; returns (int matrix, scaled extras, D).

    The matrix is int64 when the later sums provably fit, object otherwise.
    """
    D = 1
    for v in list(vectors) + list(extra):
        for c in v:
            D = lcm(D, Fraction(c).denominator)
    rows = [[int(Fraction(c) * D) for c in v] for v in vectors]
    ext = [[int(Fraction(c) * D) for c in v] for v in extra]
    return rows, ext, D


def _as_array(rows, max_terms: int, dim: int, also=()):
    biggest = max((abs(x) for r in list(rows) + list(also) for x in r), default=0)
    dtype = np.int64 if kernels.fits_int64(biggest + 1, max_terms + 1) else object
    if not rows:
        return np.zeros((0, dim), dtype=dtype)
    return np.array(rows, dtype=dtype)


def _lexmin_subset(distinct_int, members, k, D):
    """Lexicographically smallest in-box index set of size k.

    Only canonical sets (each group contributes a prefix of its indices)
    are visited; those include the lexicographic minimum.
    """
    t = sum(len(m) for m in members)
    group_of = [0] * t
    pos_in_group = [0] * t
    for g, idx in enumerate(members):
        for p, i in enumerate(idx):
            group_of[i] = g
            pos_in_group[i] = p
    dim = len(distinct_int[0]) if distinct_int else 0
    used = [0] * len(members)
    chosen: list[int] = []
    acc = [0] * dim

    def dfs(start):
        if len(chosen) == k:
            return all(-D <= x <= D for x in acc)
        for i in range(start, t):
            if t - i < k - len(chosen):
                return False
            g = group_of[i]
            if pos_in_group[i] != used[g]:
                continue
            used[g] += 1
            chosen.append(i)
            vec = distinct_int[g]
            for c in range(dim):
                acc[c] += vec[c]
            if dfs(i + 1):
                return True
            for c in range(dim):
                acc[c] -= vec[c]
            chosen.pop()
            used[g] -= 1
        return False

    if not dfs(0):
        raise AssertionError("kernel reported a subset size the witness search cannot reproduce")
    return list(chosen)


def min_box_subset(seq: VectorSequence, limit: int = DEFAULT_SUBSET_LIMIT) -> VerificationReport:
    """Smallest proper subset (2 <= |S| < t) with sum in the box.

    The enumeration covers prod(c_j + 1) multiplicity patterns, c_j being
    the group sizes; that count must not exceed 2**limit (for a sequence
    of distinct vectors this is just t <= limit).
    """
    distinct, members = group_identical(seq.vectors)
    counts = [len(m) for m in members]
    patterns = 1
    for c in counts:
        patterns *= c + 1
    if patterns > 2**limit:
        raise BudgetExceeded(
            f"{patterns} multiplicity patterns exceed 2**{limit}; raise the subset limit explicitly"
        )
    t = seq.t
    if t < 3:
        return VerificationReport("min_subset", True, None, None,
                                  f"t={t}: no proper subset has 2 or more elements")
    rows, _, D = scale_to_int(distinct)
    U = _as_array(rows, t, seq.dim)
    k = kernels.min_box_pattern_size(U, counts, D)
    if k < 0:
        return VerificationReport("min_subset", True, None, None,
                                  f"checked {patterns - 1} patterns; no proper subset sums into the box")
    S = _lexmin_subset(rows, members, k, D)
    return VerificationReport("min_subset", False, S, k,
                              f"smallest proper subset with sum in the box has size {k}")


def sum_check(seq: VectorSequence) -> VerificationReport:
    bad = [i for i, v in enumerate(seq.vectors) if not in_box(v)]
    if bad:
        return VerificationReport("sum_check", False, bad, None,
                                  f"{len(bad)} vector(s) outside the box")
    s = seq.total()
    if not in_box(s):
        return VerificationReport("sum_check", False, None, None,
                                  "sum " + _fmt_vec(s) + " is outside the box")
    return VerificationReport("sum_check", True, None, None, "sum " + _fmt_vec(s) + " is in the box")


def is_tau_witness(seq: VectorSequence, limit: int = DEFAULT_SUBSET_LIMIT) -> VerificationReport:
    """Does ``seq`` certify tau(dim) >= t?"""
    if seq.t < 2:
        return VerificationReport("tau_witness", False, None, None, "a witness needs t >= 2")
    base = sum_check(seq)
    if not base.passed and base.witness is not None:
        # some vector lies outside the box; subsets are meaningless
        return VerificationReport("tau_witness", False, None, None, base.details)
    sub = min_box_subset(seq, limit)
    if not base.passed:
        # still point at a short in-box subset when there is one
        return VerificationReport("tau_witness", False, sub.witness, sub.min_size, base.details)
    if not sub.passed:
        return VerificationReport(
            "tau_witness", False, sub.witness, sub.min_size,
            f"proper subset of size {sub.min_size} has sum in the box",
        )
    return VerificationReport("tau_witness", True, None, None,
                              f"minimal sequence: certifies tau({seq.dim}) >= {seq.t}")


def kstar_check(seq: VectorSequence, limit: int = DEFAULT_SUBSET_LIMIT,
                budget: int = DEFAULT_KSTAR_BUDGET) -> VerificationReport:
    """Minimality plus: s - sum q_i v_i stays outside the box for every
    nonnegative integer q with 1 <= sum q <= t/2."""
    t = seq.t
    if t < 4:
        raise ValueError(f"kstar_check needs t >= 4, got t={t}")
    base = is_tau_witness(seq, limit)
    if not base.passed:
        return VerificationReport("kstar", False, base.witness, base.min_size, base.details)
    distinct, members = group_identical(seq.vectors)
    h = t // 2
    m = len(distinct)
    count = comb(m + h, m) - 1
    if count > budget:
        raise BudgetExceeded(f"{count} multiplicity vectors needed, budget is {budget}")
    s = seq.total()
    rows, ext, D = scale_to_int(distinct, [s])
    U = _as_array(rows, h + t, seq.dim, ext)
    svec = np.array(ext[0], dtype=U.dtype)
    q, visited = kernels.kstar_first_hit(U, svec, D, h)
    if q is not None:
        per_index = [0] * t
        for g, qg in enumerate(q):
            per_index[members[g][0]] = qg
        return VerificationReport("kstar", False, per_index, None,
                                  f"s - s' lies in the box for multiplicities summing to {sum(q)}")
    return VerificationReport("kstar", True, None, None,
                              f"checked {visited} multiplicity vectors; certifies k*({seq.dim}) >= {t}")


def _fmt_vec(v) -> str:
    return "(" + ", ".join(format_rat(c) for c in v) + ")"


# --------------------------------------------------------------------------
# non-redundant subadditivity constraints
# --------------------------------------------------------------------------

ENUM_LIMITS = {"m": 2, "N": 4, "t_max": 8}


def minimal_multiset_enum(m: int, N: int, t_max: int) -> list[VectorSequence]:
    """All minimal multisets of nonzero vectors of ``{-N..N}^m`` with 2 <= t <= t_max.

    Minimal: the sum lies in the grid cube and no proper sub-multiset of
    size >= 2 does.  Returned sorted by (t, vectors).
    """
    if not (1 <= m <= ENUM_LIMITS["m"] and 1 <= N <= ENUM_LIMITS["N"]
            and 2 <= t_max <= ENUM_LIMITS["t_max"]):
        raise ValueError(f"enumeration limited to m<=2, N<=4, 2<=t_max<=8; got m={m}, N={N}, t_max={t_max}")
    grid = sorted(
        v for v in np.ndindex(*([2 * N + 1] * m))
        if any(c != N for c in v)
    )
    grid = [tuple(c - N for c in v) for v in grid]
    vecs = np.array(grid, dtype=np.int64)
    found: list[tuple] = []

    def inside(arr):
        return np.all(np.abs(arr) <= N, axis=-1)

    # state: chosen grid indices (nondecreasing), sum, sums of nonempty proper sub-multisets
    def extend(chosen, total, proper):
        size = len(chosen)
        start = chosen[-1] if chosen else 0
        cand = np.arange(start, len(grid))
        if size == 0:
            for gi in cand:
                extend([int(gi)], vecs[gi], np.zeros((0, m), np.int64))
            return
        if len(proper):
            # drop candidates that would complete an in-box proper sub-multiset
            hit = inside(proper[None, :, :] + vecs[cand][:, None, :]).any(axis=1)
            cand = cand[~hit]
        new_totals = total + vecs[cand]
        done = inside(new_totals)
        for gi in cand[done]:
            found.append(tuple(chosen) + (int(gi),))
        left = t_max - size - 1
        if left <= 0:
            return
        # the sum can only move by left * N per coordinate from here
        alive = ~done & np.all(np.abs(new_totals) <= N * (left + 1), axis=1)
        for gi, new_total in zip(cand[alive], new_totals[alive]):
            v = vecs[gi]
            new_proper = np.unique(
                np.concatenate([proper, total[None, :], v[None, :], proper + v]), axis=0
            )
            extend(chosen + [int(gi)], new_total, new_proper)

    extend([], np.zeros(m, np.int64), np.zeros((0, m), np.int64))
    found.sort(key=lambda c: (len(c), c))
    return [
        VectorSequence(m, [grid[g] for g in c],
                       {"kind": "subadditive_minimal", "m": m, "N": N})
        for c in found
    ]
