"""Exact integer and rational linear algebra.

Scalars are :class:`fractions.Fraction` (rationals) and plain ``int``.
Matrices are lists of rows.  Nothing in here ever touches a float.
"""

from __future__ import annotations

import operator
from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence[int]]
QMatrix = Sequence[Sequence[Fraction]]


class SingularMatrixError(ValueError):
    pass


class RankError(ValueError):
    pass


_RAT_OPS = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


def rat_arith(a, b, op: str):
    """Apply ``op`` to two rationals exactly.

    ``op`` is one of ``add``, ``sub``, ``mul``, ``div`` or ``cmp``; ``cmp``
    returns -1, 0 or 1.  Division by zero raises ``ZeroDivisionError``.
    """
    a, b = Fraction(a), Fraction(b)
    if op == "cmp":
        return (a > b) - (a < b)
    try:
        fn = _RAT_OPS[op]
    except KeyError:
        raise ValueError(f"unknown rational op {op!r}") from None
    return fn(a, b)


def parse_rat(text) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or an int into a Fraction.

    Floats are rejected so that no binary rounding can leak in.
    """
    if isinstance(text, bool) or isinstance(text, float):
        raise ValueError(f"not an exact rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not an exact rational: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(p, q)


def format_rat(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _shape(M) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for row in M:
        if len(row) != cols:
            raise ValueError("ragged matrix")
    return rows, cols


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B) -> list[list]:
    n, k = _shape(A)
    k2, m = _shape(B)
    if k != k2:
        raise ValueError("inner dimensions differ")
    cols = list(zip(*B)) if k else [() for _ in range(m)]
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def matvec(A, x) -> list:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A) -> list[list]:
    return [list(col) for col in zip(*A)]


def det(M: Matrix) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    n, m = _shape(M)
    if n != m:
        raise ValueError("det needs a square matrix")
    if n == 0:
        return 1
    a = [[int(v) for v in row] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                # exact division is the Bareiss invariant
                ai[j] = (ai[j] * akk - aik * rowk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def inverse(M) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan over the rationals."""
    n, m = _shape(M)
    if n != m:
        raise ValueError("inverse needs a square matrix")
    a = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise SingularMatrixError("matrix is singular")
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        rowc = [v / piv for v in a[c]]
        a[c] = rowc
        for r in range(n):
            f = a[r][c]
            if r != c and f != 0:
                a[r] = [x - f * y for x, y in zip(a[r], rowc)]
    return [row[n:] for row in a]


def adjugate_inverse(M: Matrix):
    """Return ``(adj, inv, det)`` for a nonsingular integer matrix.

    ``adj`` is integral, ``inv = adj / det`` and ``M @ inv == I`` is
    checked before returning.
    """
    d = det(M)
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    inv = inverse(M)
    adj = []
    for row in inv:
        out = []
        for v in row:
            w = v * d
            if w.denominator != 1:
                raise ArithmeticError("adjugate came out non-integral")
            out.append(w.numerator)
        adj.append(out)
    if matmul(M, inv) != identity(len(M)):
        raise ArithmeticError("M @ inv != I")
    return adj, inv, d


def rank(M) -> int:
    rows, cols = _shape(M)
    a = [[Fraction(v) for v in row] for row in M]
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r][c]
        for i in range(r + 1, rows):
            f = a[i][c] / piv
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def primitive(v: Sequence[int]) -> list[int]:
    """Divide an integer vector by the gcd of its entries; first nonzero > 0."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    if g == 0:
        return [0] * len(v)
    out = [int(x) // g for x in v]
    first = next(x for x in out if x != 0)
    if first < 0:
        out = [-x for x in out]
    return out


def kernel_primitive(C: Matrix) -> list[int]:
    """Primitive integer generator of the kernel of a d x (d+1) matrix of rank d.

    Built from signed maximal minors (the generalized cross product), so
    every integral kernel vector is an integer multiple of the result.
    """
    d, cols = _shape(C)
    if cols != d + 1:
        raise ValueError(f"expected a {d}x{d + 1} matrix, got {d}x{cols}")
    if rank(C) != d:
        raise RankError(f"rank of C is not {d}")
    z = []
    for j in range(d + 1):
        minor = [[row[c] for c in range(d + 1) if c != j] for row in C]
        z.append((-1) ** j * det(minor))
    return primitive(z)


def feasible_vertex(A_eq, b_eq, start: Sequence[int] | None = None):
    """Find a vertex of ``{x in [0,1]^n : A_eq x = b_eq}`` or return None.

    Revised phase-I simplex over the rationals for bounded variables, with
    Bland's rule (lowest index enters, lowest basic index leaves on ties).
    ``start`` optionally puts each variable initially at its lower (0) or
    upper (1) bound; a good start only saves pivots, the answer is always a
    basic feasible solution.
    """
    m = len(A_eq)
    if len(b_eq) != m:
        raise ValueError("A_eq and b_eq disagree on the number of rows")
    n = len(A_eq[0]) if m else (len(start) if start is not None else 0)
    for row in A_eq:
        if len(row) != n:
            raise ValueError("ragged constraint matrix")
    if start is None:
        start = [0] * n
    elif len(start) != n:
        raise ValueError("start has the wrong length")

    at_upper = [bool(s) for s in start]
    rows = []
    vals = []
    for row, b in zip(A_eq, b_eq):
        row = [Fraction(v) for v in row]
        r = Fraction(b) - sum((a for a, up in zip(row, at_upper) if up), Fraction(0))
        if r < 0:
            row = [-v for v in row]
            r = -r
        rows.append(row)
        vals.append(r)
    cols = list(zip(*rows)) if m else [() for _ in range(n)]
    one, zero = Fraction(1), Fraction(0)
    binv = [[one if i == k else zero for k in range(m)] for i in range(m)]
    # basis[i] is a structural index, or -1 for the row's own artificial
    basis = [-1] * m
    is_basic = [False] * n

    def column(j):
        col = cols[j]
        return [sum((b * a for b, a in zip(brow, col) if a), zero) for brow in binv]

    while True:
        art = [i for i in range(m) if basis[i] < 0]
        if not art or all(vals[i] == 0 for i in art):
            break
        pi = [sum((binv[i][k] for i in art), zero) for k in range(m)]
        enter = -1
        for j in range(n):
            if is_basic[j]:
                continue
            dj = -sum((p * a for p, a in zip(pi, cols[j]) if a), zero)
            if (dj < 0 and not at_upper[j]) or (dj > 0 and at_upper[j]):
                enter = j
                break
        if enter < 0:
            return None
        j = enter
        alpha = column(j)
        delta = -1 if at_upper[j] else 1
        theta = one
        leave = -1
        leave_key = None
        for i in range(m):
            g = -delta * alpha[i]
            if g < 0:
                lim = vals[i] / -g
            elif g > 0 and basis[i] >= 0:
                lim = (1 - vals[i]) / g
            else:
                continue
            key = basis[i] if basis[i] >= 0 else n + i
            if lim < theta or (lim == theta and (leave < 0 or key < leave_key)):
                theta, leave, leave_key = lim, i, key
        if theta:
            for i in range(m):
                if alpha[i]:
                    vals[i] -= delta * theta * alpha[i]
        if leave < 0:
            at_upper[j] = not at_upper[j]
            continue
        new_val = (1 if at_upper[j] else 0) + delta * theta
        _pivot(binv, alpha, leave)
        old = basis[leave]
        if old >= 0:
            is_basic[old] = False
            at_upper[old] = vals[leave] >= 1
        basis[leave] = j
        is_basic[j] = True
        vals[leave] = new_val

    # drive zero-valued artificials out; rows where that fails are redundant
    for i in range(m):
        if basis[i] >= 0:
            continue
        brow = binv[i]
        for j in range(n):
            if is_basic[j]:
                continue
            if sum((b * a for b, a in zip(brow, cols[j]) if a), zero) != 0:
                alpha = column(j)
                _pivot(binv, alpha, i)
                basis[i] = j
                is_basic[j] = True
                vals[i] = one if at_upper[j] else zero
                break

    x = [one if at_upper[j] else zero for j in range(n)]
    for i in range(m):
        if basis[i] >= 0:
            x[basis[i]] = vals[i]
    for row, b in zip(A_eq, b_eq):
        if sum(Fraction(a) * xj for a, xj in zip(row, x) if a) != b:
            raise ArithmeticError("simplex produced an infeasible point")
    return x


def _pivot(binv, alpha, r: int) -> None:
    piv = alpha[r]
    rowr = [v / piv for v in binv[r]]
    binv[r] = rowr
    for i, row in enumerate(binv):
        if i == r:
            continue
        f = alpha[i]
        if f:
            binv[i] = [a - f * b for a, b in zip(row, rowr)]
