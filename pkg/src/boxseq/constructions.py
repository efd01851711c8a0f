"""Lower-bound sequences built from sign matrices.

c1  minimal sequence in dimension 2d from a rect-contract matrix C
c2  zero-sum sequence in dimension d+1 from a square-contract matrix A
c3  zero-sum ±1 sequence in dimension 2d+1 from the same kind of A

Every generator checks its sums exactly before returning.  Vectors come out
grouped by distinct value; ``meta["groups"]`` lists (vector, count) pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .box import (
    DEFAULT_SUBSET_LIMIT,
    VectorSequence,
    group_identical,
    in_box,
    is_tau_witness,
)
from .exact import format_rat, kernel_primitive, rank
from .signmatrix import MatrixCertificate, SignMatrix, verify_rect, verify_square


class ConstructionError(ValueError):
    pass


@dataclass
class ConstructionOutput:
    seq: VectorSequence
    kind: str
    source: SignMatrix
    certificate: MatrixCertificate
    params: dict
    claimed_bound: str

    def to_dict(self) -> dict:
        return self.seq.to_dict()


def _groups_meta(vectors) -> list[dict]:
    distinct, members = group_identical(vectors)
    return [{"vector": [format_rat(c) for c in v], "count": len(m)}
            for v, m in zip(distinct, members)]


def _rats(xs) -> list[str]:
    return [format_rat(x) for x in xs]


def construct_one(C: SignMatrix, verify: bool = True,
                  limit: int = DEFAULT_SUBSET_LIMIT) -> ConstructionOutput:
    """Dimension-doubled minimal sequence from a d x (d+1) sign matrix.

    ``C`` must already have a nonnegative primitive kernel vector z.  With
    ``verify`` the output is run through the exhaustive witness check
    whenever its multiplicity patterns fit under ``2**limit``.
    """
    d = C.rows
    if C.cols != d + 1 or rank(C.as_lists()) != d:
        raise ConstructionError("construct_one needs a rank-d, d x (d+1) sign matrix")
    z = kernel_primitive(C.as_lists())
    if any(x < 0 for x in z):
        raise ConstructionError(f"kernel vector {z} has a negative entry; normalize C first")
    t = sum(z)
    if t < 2:
        raise ConstructionError("t = |z|_1 must be at least 2")
    cert = verify_rect(C)
    eps = Fraction(1, 10 * t)
    one = Fraction(1)
    vectors = []
    for j, mult in enumerate(z):
        w = C.column(j)
        w1 = [one if x == 1 else -(1 - eps) for x in w]
        w2 = [(1 - eps) if x == 1 else -one for x in w]
        vectors.extend([tuple(w1 + w2)] * mult)
    seq = VectorSequence(2 * d, vectors)
    s = seq.total()
    if any(abs(c) > t * eps for c in s) or not all(in_box(v) for v in vectors):
        raise AssertionError("construction 1 sum left [-t eps, t eps]^{2d}")
    params = {"t": t, "eps": format_rat(eps), "z": [str(x) for x in z]}
    claimed = f"tau({2 * d}) >= {t}"
    seq.meta = {
        "kind": "c1",
        "claimed_bound": claimed,
        "params": params,
        "source": C.to_dict(),
        "certificate": cert.to_dict(),
        "groups": _groups_meta(vectors),
    }
    if verify:
        patterns = 1
        for x in z:
            patterns *= x + 1
        if patterns <= 2**limit:
            rep = is_tau_witness(seq, limit)
            if not rep.passed:
                raise AssertionError(f"construction 1 output is not minimal: {rep.details}")
            seq.meta["verified_minimal"] = True
        else:
            seq.meta["verified_minimal"] = None
    return ConstructionOutput(seq, "c1", C, cert, params, claimed)


def _square_inputs(A: SignMatrix, kind: str):
    d = A.rows
    cert = verify_square(A)
    if not cert.passed:
        failed = [k for k, v in cert.checks.items() if not v and k != "first_row_positive"]
        raise ConstructionError(f"{kind}: square contract fails ({', '.join(failed)})")
    if not cert.checks.get("first_row_positive"):
        raise ConstructionError(f"{kind}: first row of B = 2^d A^-1 is not strictly positive")
    if cert.R < 2**d:
        raise ConstructionError(f"{kind}: R = {cert.R} < 2^d = {2**d}, so alpha > 1")
    return cert


def _subset_bound(cert: MatrixCertificate, d: int) -> int:
    # any in-box S forces A z = b > 0, z_1 = (B b)_1 / 2^d >= max(1, ceil(min B_1j / 2^d)), plus k >= 1
    lo = -(-cert.first_row_min // 2**d)
    return max(1, lo) + 1


def construct_two(A: SignMatrix) -> ConstructionOutput:
    """r_j copies of (a_j, 1) and R copies of (-alpha 1, -1), alpha = 2^d / R."""
    d = A.rows
    cert = _square_inputs(A, "construct_two")
    r, R = cert.row_sums, cert.R
    alpha = Fraction(2**d, R)
    vectors = []
    for j, mult in enumerate(r):
        vectors.extend([tuple(Fraction(x) for x in A.column(j)) + (Fraction(1),)] * mult)
    c = tuple([-alpha] * d + [Fraction(-1)])
    vectors.extend([c] * R)
    seq = VectorSequence(d + 1, vectors)
    if any(x != 0 for x in seq.total()):
        raise AssertionError("construction 2 does not sum to zero")
    params = {"t": 2 * R, "alpha": format_rat(alpha), "r": [str(x) for x in r], "R": str(R),
              "alpha_is_one": alpha == 1}
    bound = _subset_bound(cert, d)
    claimed = (f"every S with |S| >= 2 and sum in the box has |S| >= {bound} "
               f"(first row of B >= {cert.first_row_min})")
    seq.meta = {
        "kind": "c2",
        "claimed_bound": claimed,
        "params": params,
        "subset_size_lower_bound": bound,
        "source": A.to_dict(),
        "certificate": cert.to_dict(),
        "groups": _groups_meta(vectors),
    }
    return ConstructionOutput(seq, "c2", A, cert, params, claimed)


def construct_three(A: SignMatrix) -> ConstructionOutput:
    """±1 sequence of length t = 2R in dimension 2d+1, summing to zero."""
    d = A.rows
    cert = _square_inputs(A, "construct_three")
    r, R = cert.row_sums, cert.R
    if R % 2:
        raise ConstructionError(f"construct_three: R = {R} is odd")
    t = 2 * R
    if t % 4:
        raise AssertionError("t is not divisible by 4")
    u = []
    for j, mult in enumerate(r):
        u.extend([A.column(j)] * mult)
    half = t // 2
    cut = t // 4 - 2 ** (d - 1)
    first = []
    for i in range(1, half + 1):
        band = 1 if i <= cut else -1
        first.append(tuple(u[i - 1]) + (band,) * d + (1,))
    second = [v[d:2 * d] + v[:d] + (-1,) for v in first]
    expected = tuple([2**d] * d + [-(2**d)] * d + [half])
    got = tuple(sum(v[c] for v in first) for c in range(2 * d + 1))
    if got != expected:
        raise AssertionError(f"first half sums to {got}, expected {expected}")
    vectors = first + second
    seq = VectorSequence(2 * d + 1, vectors)
    if any(x != 0 for x in seq.total()):
        raise AssertionError("construction 3 does not sum to zero")
    params = {"t": t, "r": [str(x) for x in r], "R": str(R), "band_cut": cut,
              "half_sum": [str(x) for x in expected]}
    claimed = (f"tau_pm1({2 * d + 1}) lower bound: short in-box subsequences are excluded "
               f"(first row of B >= {cert.first_row_min})")
    seq.meta = {
        "kind": "c3",
        "all_pm1": True,
        "claimed_bound": claimed,
        "params": params,
        "source": A.to_dict(),
        "certificate": cert.to_dict(),
        "groups": _groups_meta(vectors),
    }
    return ConstructionOutput(seq, "c3", A, cert, params, claimed)
