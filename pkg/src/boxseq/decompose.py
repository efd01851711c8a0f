"""Find a proper subsequence with sum in the box in a long box sequence.

Append the artificial element -s to W, Steinitz-order the result, and walk
the longer side of the artificial element: its even-indexed partial sums
live in d*[-1,1]^d, which splits into (2d)^d unit cells, so with more than
(2d)^d of them two share a cell and the block between them sums into the
box.  This is guaranteed once t >= 4(2d)^d.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .box import VectorSequence, in_box, subseq_sum
from .exact import format_rat
from .steinitz import SteinitzOrdering, steinitz_order


def threshold(d: int) -> int:
    if d < 1:
        raise ValueError("d must be >= 1")
    return 4 * (2 * d) ** d


def cell(x, d: int) -> tuple[int, ...]:
    """Unit cell [0,1)^d + z of a point in d*[-1,1]^d, top face clamped into the last cell."""
    return tuple(min(floor(c), d - 1) for c in x)


@dataclass
class DecompositionResult:
    subset: list[int]
    ordering: SteinitzOrdering
    cell: tuple[int, ...]
    collision: tuple[int, int]
    mirrored: bool

    def to_dict(self, seq: VectorSequence | None = None) -> dict:
        out = {
            "subset": list(self.subset),
            "size": len(self.subset),
            "cell": list(self.cell),
            "collision": list(self.collision),
            "mirrored": self.mirrored,
            "ordering": self.ordering.to_dict(),
        }
        if seq is not None:
            out["subset_sum"] = [format_rat(c) for c in subseq_sum(seq, self.subset)]
        return out


def decompose(W: VectorSequence) -> DecompositionResult | None:
    """Proper S (2 <= |S| < t) with sum in the box, or None if no cell collision occurs."""
    t, d = W.t, W.dim
    if t < 2:
        raise ValueError("decompose needs t >= 2")
    for i, v in enumerate(W.vectors):
        if not in_box(v):
            raise ValueError(f"vector {i} lies outside the box")
    s = W.total()
    if not in_box(s):
        raise ValueError("the sum of W lies outside the box")

    artificial = t
    V = VectorSequence(d, list(W.vectors) + [tuple(-c for c in s)])
    ordering = steinitz_order(V, keep_certificates=False)
    perm = ordering.permutation
    pos = perm.index(artificial)
    if 2 * pos >= t:
        work = perm[:pos]
        mirrored = False
    else:
        # prefix sums of the reversal are negated suffix sums, still in d*B
        work = perm[pos + 1:][::-1]
        mirrored = True

    # stop at 2j <= t - 1 so the block can never be all of W
    last = min(len(work), t - 1)
    seen: dict[tuple[int, ...], int] = {}
    acc = [Fraction(0)] * d
    for k in range(last + 1):
        if k > 0:
            for c, x in enumerate(W.vectors[work[k - 1]]):
                acc[c] += x
        if k % 2:
            continue
        key = cell(acc, d)
        if key in seen:
            i2 = seen[key]
            subset = sorted(work[i2:k])
            result = DecompositionResult(subset, ordering, key, (i2, k), mirrored)
            _check(W, result)
            return result
        seen[key] = k
    return None


def _check(W: VectorSequence, res: DecompositionResult) -> None:
    if not 2 <= len(res.subset) < W.t:
        raise AssertionError(f"decomposition returned |S|={len(res.subset)}")
    if not in_box(subseq_sum(W, res.subset)):
        raise AssertionError("decomposition returned a block whose sum leaves the box")
