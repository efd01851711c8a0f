"""Steinitz-type rearrangement of a zero-sum multiset of box vectors.

Every prefix sum of the returned ordering has max-norm at most d.  The
ordering is built backwards through a chain V = A_n > A_{n-1} > ... > A_d
where each level carries a certificate lambda in [0,1]^{A_k} with
sum(lambda_v v) = 0 and sum(lambda_v) = k - d.  The sum over A_k then equals
sum((1 - lambda_v) v), a combination with coefficients in [0,1] adding up to
d, hence inside d*[-1,1]^d.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .box import VectorSequence, in_box, max_norm
from .exact import feasible_vertex, format_rat


class SteinitzError(RuntimeError):
    pass


@dataclass
class SteinitzOrdering:
    permutation: list[int]
    prefix_norms: list[Fraction]
    bound: int
    # (A_k as sorted original indices, lambda values aligned with A_k)
    chain_certificates: list[tuple[list[int], list[Fraction]]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "perm": list(self.permutation),
            "prefix_norms": [format_rat(x) for x in self.prefix_norms],
            "bound": self.bound,
        }


def _prefix_norms(vectors, perm) -> list[Fraction]:
    d = len(vectors[0]) if vectors else 0
    acc = [Fraction(0)] * d
    out = []
    for i in perm:
        for c in range(d):
            acc[c] += vectors[i][c]
        out.append(max_norm(acc))
    return out


def _next_level(vectors, members, target, hint):
    """Vertex of {lam in [0,1]^members : sum lam_v v = 0, sum lam_v = target}."""
    d = len(vectors[members[0]])
    rows = [[vectors[i][c] for i in members] for c in range(d)]
    rows.append([1] * len(members))
    rhs = [0] * d + [target]
    return feasible_vertex(rows, rhs, start=hint)


def steinitz_order(V: VectorSequence, keep_certificates: bool = True) -> SteinitzOrdering:
    """Order a zero-sum multiset so that all prefix sums lie in d*[-1,1]^d.

    Each step takes a vertex of the next level's polytope on the current
    set; such a vertex has a zero coordinate (it has at most d+1 fractional
    entries while the deficits 1 - lam_v add up to d+1), and dropping that
    element leaves a certificate for the smaller set.  Should the vertex
    ever lack a zero, candidates are tried in order of increasing weight
    with an explicit feasibility test.
    """
    vectors = V.vectors
    n, d = V.t, V.dim
    for i, v in enumerate(vectors):
        if not in_box(v):
            raise ValueError(f"vector {i} lies outside the box")
    if any(x != 0 for x in V.total()):
        raise ValueError("steinitz_order needs a zero-sum multiset")
    if n == 0:
        return SteinitzOrdering([], [], d)
    if n <= d:
        perm = list(range(n))
        return SteinitzOrdering(perm, _prefix_norms(vectors, perm), d)

    current = list(range(n))
    lam = [Fraction(n - d, n)] * n
    certs = [(list(current), list(lam))] if keep_certificates else []
    tail: list[int] = []
    for k in range(n, d, -1):
        target = k - 1 - d
        hint = [1 if x * 2 >= 1 else 0 for x in lam]
        beta = _next_level(vectors, current, target, hint)
        if beta is None:
            raise SteinitzError(f"level {k}: next polytope empty, the chain certificate is broken")
        drop = next((p for p, b in enumerate(beta) if b == 0), None)
        if drop is not None:
            new_lam = beta[:drop] + beta[drop + 1:]
        else:
            drop, new_lam = _fallback_drop(vectors, current, beta, target)
        tail.append(current[drop])
        current = current[:drop] + current[drop + 1:]
        lam = new_lam
        if keep_certificates:
            certs.append((list(current), list(lam)))
    perm = sorted(current) + tail[::-1]
    ordering = SteinitzOrdering(perm, _prefix_norms(vectors, perm), d, certs)
    if any(x > d for x in ordering.prefix_norms):
        raise SteinitzError("prefix bound violated; this is a bug")
    return ordering


def _fallback_drop(vectors, current, beta, target):
    order = sorted(range(len(current)), key=lambda p: (beta[p], p))
    for p in order:
        rest = current[:p] + current[p + 1:]
        lam = _next_level(vectors, rest, target, None)
        if lam is not None:
            return p, lam
    raise SteinitzError("no removable element found; this is a bug")


def verify_prefix_bound(ordering: SteinitzOrdering, V: VectorSequence, factor) -> bool:
    perm = ordering.permutation
    if sorted(perm) != list(range(V.t)):
        raise ValueError("ordering is not a permutation of the sequence")
    if not perm:
        return True
    factor = Fraction(factor)
    return all(x <= factor for x in _prefix_norms(V.vectors, perm))


def verify_certificates(ordering: SteinitzOrdering, V: VectorSequence) -> bool:
    """Check every chain certificate: lam in [0,1], sum lam = k - d, sum lam v = 0."""
    d = V.dim
    for members, lam in ordering.chain_certificates:
        k = len(members)
        if len(lam) != k or any(not 0 <= x <= 1 for x in lam):
            return False
        if sum(lam, Fraction(0)) != k - d:
            return False
        for c in range(d):
            if sum((x * V.vectors[i][c] for i, x in zip(members, lam)), Fraction(0)) != 0:
                return False
        if sorted(ordering.permutation[:k]) != sorted(members):
            return False
    return True
