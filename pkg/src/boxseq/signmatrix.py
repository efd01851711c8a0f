"""Sign matrices and the two property contracts the lower bounds need.

rect:   a d x (d+1) sign matrix C of rank d whose primitive kernel vector z
        is nonnegative after column sign flips; t = |z|_1 is the length of
        the resulting minimal sequence.
square: a nonsingular d x d sign matrix A with B = 2^d A^-1 integral,
        nonnegative row sums and a nonnegative first row.

Providers (Sylvester doubling, exhaustive and hill-climbing search) only
have to produce matrices that pass these checks; how large the resulting
quantities are is reported, never assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .exact import (
    RankError,
    SingularMatrixError,
    adjugate_inverse,
    format_rat,
    identity,
    kernel_primitive,
    matmul,
    rank,
    transpose,
)


class NormalizationError(ValueError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class SignMatrix:
    entries: tuple

    def __init__(self, entries):
        rows = tuple(tuple(int(x) for x in row) for row in entries)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged sign matrix")
        for r in rows:
            for x in r:
                if x not in (1, -1):
                    raise ValueError(f"sign matrix entry {x} is not ±1")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def to_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": self.as_lists()}

    @classmethod
    def from_dict(cls, data) -> "SignMatrix":
        if not isinstance(data, dict) or "entries" not in data:
            raise ValueError("matrix JSON needs 'entries'")
        m = cls(data["entries"])
        if data.get("rows", m.rows) != m.rows or data.get("cols", m.cols) != m.cols:
            raise ValueError("declared shape disagrees with entries")
        return m

    def flip_row(self, i: int) -> "SignMatrix":
        return SignMatrix([[-x for x in r] if k == i else r for k, r in enumerate(self.entries)])

    def flip_col(self, j: int) -> "SignMatrix":
        return SignMatrix([[-x if k == j else x for k, x in enumerate(r)] for r in self.entries])


@dataclass
class MatrixCertificate:
    kind: str  # rect_kernel | square_inverse
    passed: bool
    matrix: SignMatrix
    checks: dict = field(default_factory=dict)
    # rect
    z: list[int] | None = None
    t: int | None = None
    # square
    det: int | None = None
    B: list[list[int]] | None = None
    row_sums: list[int] | None = None
    R: int | None = None
    first_row_min: int | None = None
    first_row_max: int | None = None
    chi: Fraction | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        def ints(v):
            return None if v is None else [str(x) for x in v]

        out = {"kind": self.kind, "passed": self.passed, "matrix": self.matrix.to_dict(),
               "checks": dict(self.checks)}
        if self.kind == "rect_kernel":
            out["z"] = ints(self.z)
            out["t"] = None if self.t is None else str(self.t)
        else:
            out.update({
                "det": None if self.det is None else str(self.det),
                "B": None if self.B is None else [ints(r) for r in self.B],
                "row_sums": ints(self.row_sums),
                "R": None if self.R is None else str(self.R),
                "first_row_min": None if self.first_row_min is None else str(self.first_row_min),
                "first_row_max": None if self.first_row_max is None else str(self.first_row_max),
                "chi": None if self.chi is None else format_rat(self.chi),
            })
        out["notes"] = list(self.notes)
        return out


# --------------------------------------------------------------------------
# contracts
# --------------------------------------------------------------------------

def verify_rect(C: SignMatrix) -> MatrixCertificate:
    """Rank/kernel check for a d x (d+1) sign matrix.

    The kernel vector is made nonnegative by flipping the columns where it
    is negative, choosing the overall sign that needs fewer flips; the
    flipped matrix is the certificate's ``matrix``.
    """
    d = C.rows
    if C.cols != d + 1:
        raise ValueError(f"expected a {d}x{d + 1} matrix, got {d}x{C.cols}")
    if rank(C.as_lists()) != d:
        return MatrixCertificate("rect_kernel", False, C, {"rank_full": False},
                                 notes=[f"rank < {d}"])
    z = kernel_primitive(C.as_lists())
    neg = sum(1 for x in z if x < 0)
    pos = sum(1 for x in z if x > 0)
    if pos < neg:
        z = [-x for x in z]
    flipped = C
    for j, x in enumerate(z):
        if x < 0:
            flipped = flipped.flip_col(j)
    z = [abs(x) for x in z]
    if any(row[0] != 0 for row in matmul(flipped.as_lists(), [[x] for x in z])):
        raise ArithmeticError("kernel vector does not solve Cz = 0")
    return MatrixCertificate("rect_kernel", True, flipped, {"rank_full": True, "z_nonneg": True},
                             z=z, t=sum(z))


def verify_square(A: SignMatrix) -> MatrixCertificate:
    d = A.rows
    if A.cols != d:
        raise ValueError("verify_square needs a square matrix")
    try:
        adj, inv, det = adjugate_inverse(A.as_lists())
    except SingularMatrixError:
        return MatrixCertificate("square_inverse", False, A, {"nonsingular": False}, det=0,
                                 notes=["singular"])
    scale = 2**d
    B_exact = [[scale * x for x in row] for row in inv]
    integral = all(x.denominator == 1 for row in B_exact for x in row)
    checks = {"nonsingular": True, "B_integral": integral}
    cert = MatrixCertificate("square_inverse", False, A, checks, det=det,
                             chi=max(abs(x) for row in inv for x in row))
    if det == 2 ** (d - 1) or det == -(2 ** (d - 1)):
        cert.notes.append("|det| = 2^(d-1)")
    if not integral:
        return cert
    B = [[x.numerator for x in row] for row in B_exact]
    if matmul(B, A.as_lists()) != [[scale * x for x in row] for row in identity(d)]:
        raise ArithmeticError("B A != 2^d I")
    r = [sum(row) for row in B]
    cert.B = B
    cert.row_sums = r
    cert.R = sum(r)
    cert.first_row_min = min(B[0])
    cert.first_row_max = max(B[0])
    checks["row_sums_nonneg"] = all(x >= 0 for x in r)
    checks["first_row_nonneg"] = all(x >= 0 for x in B[0])
    checks["first_row_positive"] = all(x > 0 for x in B[0])
    cert.passed = all(checks[k] for k in ("nonsingular", "B_integral", "row_sums_nonneg", "first_row_nonneg"))
    return cert


def normalize_square(A_tilde: SignMatrix) -> SignMatrix:
    """Transpose, move the best inverse row first, then fix signs by flips.

    Raises :class:`NormalizationError` when the result still fails
    :func:`verify_square` (in practice: B = 2^d A^-1 not integral).  A zero
    in the first inverse row is not a failure; the certificate's
    ``first_row_positive`` flag reports it.
    """
    d = A_tilde.rows
    if A_tilde.cols != d:
        raise ValueError("normalize_square needs a square matrix")
    A = SignMatrix(transpose(A_tilde.as_lists()))
    try:
        _, inv, _ = adjugate_inverse(A.as_lists())
    except SingularMatrixError:
        raise NormalizationError("matrix is singular") from None
    mins = [min(abs(x) for x in row) for row in inv]
    p = max(range(d), key=lambda i: (mins[i], -i))
    order = [p] + [j for j in range(d) if j != p]
    # permuting columns of A permutes rows of A^-1 the same way
    A = SignMatrix([[row[j] for j in order] for row in A.entries])
    inv = [inv[j] for j in order]
    for i, x in enumerate(inv[0]):
        if x < 0:
            # row i of A <-> column i of A^-1
            A = A.flip_row(i)
            for row in inv:
                row[i] = -row[i]
    for j in range(1, d):
        if sum(inv[j]) < 0:
            A = A.flip_col(j)
            inv[j] = [-x for x in inv[j]]
    cert = verify_square(A)
    if not cert.passed:
        failed = [k for k, v in cert.checks.items() if not v and k != "first_row_positive"]
        raise NormalizationError("normalized matrix fails " + ", ".join(failed), cert)
    return A


def sylvester(d: int) -> SignMatrix:
    if d < 1 or d & (d - 1):
        raise ValueError(f"sylvester needs a power of two, got {d}")
    H = [[1]]
    while len(H) < d:
        H = [row + row for row in H] + [row + [-x for x in row] for row in H]
    return SignMatrix(H)


# --------------------------------------------------------------------------
# search
# --------------------------------------------------------------------------

@dataclass
class SearchResult:
    matrix: SignMatrix
    certificate: MatrixCertificate
    objective: int
    evaluations: int
    exhaustive: bool
    raw: SignMatrix

    def to_dict(self) -> dict:
        return {
            "matrix": self.matrix.to_dict(),
            "certificate": self.certificate.to_dict(),
            "objective": str(self.objective),
            "evaluations": self.evaluations,
            "exhaustive": self.exhaustive,
        }


def _all_sign_matrices(r: int, c: int) -> np.ndarray:
    """Every r x c sign matrix, in lexicographic order of entries (-1 < +1)."""
    n = r * c
    codes = np.arange(2**n, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n - 1, -1, -1)) & 1
    return (2 * bits - 1).reshape(-1, r, c)


def _score_rect(mats: np.ndarray) -> np.ndarray:
    d = mats.shape[1]
    if d <= kernels.MAX_SIGN_DIM:
        return kernels.rect_l1_batch(mats)
    out = []
    for m in mats:
        try:
            out.append(sum(abs(x) for x in kernel_primitive(m.tolist())))
        except RankError:
            out.append(0)
    return np.array(out, dtype=object)


def _score_square(mats: np.ndarray) -> np.ndarray:
    d = mats.shape[1]
    if d <= kernels.MAX_SIGN_DIM:
        return kernels.square_score_batch(mats, 2**d)
    out = []
    for m in mats:
        try:
            _, inv, _ = adjugate_inverse(m.tolist())
        except SingularMatrixError:
            out.append(-1)
            continue
        B = [[x * 2**d for x in row] for row in inv]
        if any(x.denominator != 1 for row in B for x in row):
            out.append(-1)
        else:
            out.append(max(min(abs(B[i][c]) for i in range(d)) for c in range(d)).numerator)
    return np.array(out, dtype=object)


class _Best:
    """Running best with ties broken by lexicographic matrix order."""

    def __init__(self):
        self.value = None
        self.key = None
        self.matrix = None

    def offer(self, mats, vals):
        for m, v in zip(mats, vals):
            v = int(v)
            if self.value is not None and v < self.value:
                continue
            key = tuple(m.ravel().tolist())
            if self.value is None or v > self.value or key < self.key:
                self.value, self.key, self.matrix = v, key, m.copy()


def _exhaustive(r, c, score):
    mats = _all_sign_matrices(r, c)
    best = _Best()
    vals = np.concatenate([score(mats[i:i + 4096]) for i in range(0, len(mats), 4096)])
    best.offer(mats, vals)
    return best, len(mats)


def _hill_climb(r, c, score, budget, seed, starts=()):
    """Steepest-ascent single-entry flips with seeded random restarts.

    The evaluated sequence only depends on the seed, so a larger budget
    evaluates a superset and the best value never decreases.
    """
    rng = np.random.default_rng(seed)
    best = _Best()
    evals = 0
    starts = list(starts)
    while evals < budget:
        if starts:
            X = np.array(starts.pop(0), dtype=np.int64)
        else:
            X = rng.choice(np.array([-1, 1], dtype=np.int64), size=(r, c))
        v = int(score(X[None])[0])
        evals += 1
        best.offer(X[None], [v])
        while evals < budget:
            nbrs = np.repeat(X[None], r * c, axis=0)
            flat = nbrs.reshape(r * c, r * c)
            flat[np.arange(r * c), np.arange(r * c)] *= -1
            nbrs = nbrs[: budget - evals]
            vals = score(nbrs)
            evals += len(nbrs)
            best.offer(nbrs, vals)
            j = int(np.argmax(vals))
            if int(vals[j]) > v:
                X, v = nbrs[j].copy(), int(vals[j])
            else:
                break
    return best, evals


def search_rect(d: int, budget: int = 10**4, seed: int = 0) -> SearchResult:
    """Sign matrix C (d x (d+1)) maximizing t = |z|_1; exhaustive for d <= 3."""
    if d < 1:
        raise ValueError("d must be >= 1")
    exhaustive = d <= 3
    if exhaustive:
        best, evals = _exhaustive(d, d + 1, _score_rect)
    else:
        best, evals = _hill_climb(d, d + 1, _score_rect, max(budget, 1), seed)
    raw = SignMatrix(best.matrix.tolist())
    cert = verify_rect(raw)
    if best.value <= 0 or not cert.passed:
        raise RuntimeError(f"search_rect found no full-rank matrix within budget {budget}")
    return SearchResult(cert.matrix, cert, int(cert.t), evals, exhaustive, raw)


def search_square(d: int, budget: int = 10**4, seed: int = 0) -> SearchResult:
    """Sign matrix maximizing the smallest first-row entry of B = 2^d A^-1.

    Scores are taken on the raw matrix (best column of its inverse), and
    the winner is passed through :func:`normalize_square`.  Exhaustive for
    d <= 2; otherwise hill climbing seeded with Sylvester's matrix when d is
    a power of two.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    exhaustive = d <= 2
    if exhaustive:
        best, evals = _exhaustive(d, d, _score_square)
    else:
        starts = [sylvester(d).as_lists()] if d & (d - 1) == 0 else []
        best, evals = _hill_climb(d, d, _score_square, max(budget, 1), seed, starts)
    if best.value is None or best.value < 0:
        raise RuntimeError(f"search_square found no admissible matrix within budget {budget}")
    raw = SignMatrix(best.matrix.tolist())
    A = normalize_square(raw)
    cert = verify_square(A)
    if cert.first_row_min != best.value:
        raise ArithmeticError("normalized first row disagrees with the search score")
    return SearchResult(A, cert, int(cert.first_row_min), evals, exhaustive, raw)
