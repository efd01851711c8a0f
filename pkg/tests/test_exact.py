import itertools
import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from boxseq.exact import (
    RankError,
    SingularMatrixError,
    adjugate_inverse,
    det,
    feasible_vertex,
    identity,
    kernel_primitive,
    matmul,
    parse_rat,
    format_rat,
    rank,
    rat_arith,
)

from conftest import adj_cofactor, det_cofactor

small_int_matrix = st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n)
)


def test_rat_arith_examples():
    assert rat_arith(F(1, 2), F(1, 3), "add") == F(5, 6)
    assert rat_arith(F(2, 3), F(3, 2), "mul") == 1
    assert rat_arith(-1, -(1 - F(1, 40)), "cmp") == -1
    assert rat_arith(3, 3, "cmp") == 0
    with pytest.raises(ZeroDivisionError):
        rat_arith(1, 0, "div")


@pytest.mark.parametrize("text,value", [("3", F(3)), ("-2/3", F(-2, 3)), ("4/6", F(2, 3)), (7, F(7))])
def test_parse_rat(text, value):
    assert parse_rat(text) == value


@pytest.mark.parametrize("bad", ["1/0", "x", "1.5", 0.5, None, True])
def test_parse_rat_rejects(bad):
    with pytest.raises(ValueError):
        parse_rat(bad)


@given(st.fractions(max_denominator=10**6))
def test_rat_roundtrip(x):
    assert parse_rat(format_rat(x)) == x


@pytest.mark.parametrize("M,expected", [
    ([[1, 1], [1, -1]], -2),
    (identity(4), 1),
    ([[1, 1, 1], [1, 1, -1], [1, -1, 1]], -4),
])
def test_det_examples(M, expected):
    assert det(M) == expected
    assert det_cofactor(M) == expected


@settings(max_examples=300)
@given(small_int_matrix)
def test_det_matches_cofactor(M):
    assert det(M) == det_cofactor(M)


@settings(max_examples=200)
@given(small_int_matrix)
def test_adjugate_identity(M):
    d = det(M)
    if d == 0:
        with pytest.raises(SingularMatrixError):
            adjugate_inverse(M)
        return
    adj, inv, dd = adjugate_inverse(M)
    assert dd == d
    assert adj == adj_cofactor(M)
    assert matmul(M, adj) == [[d * x for x in row] for row in identity(len(M))]
    assert matmul(M, inv) == identity(len(M))


def test_adjugate_examples():
    adj, inv, d = adjugate_inverse([[1, 1], [1, -1]])
    assert inv == [[F(1, 2), F(1, 2)], [F(1, 2), F(-1, 2)]]
    adj, inv, d = adjugate_inverse(identity(3))
    assert adj == identity(3) and inv == identity(3)
    adj, inv, d = adjugate_inverse([[2]])
    assert adj == [[1]] and inv == [[F(1, 2)]] and d == 2


@pytest.mark.parametrize("M,r", [
    ([[1, 1, -1], [1, -1, 1]], 2),
    ([[0, 0, 0], [0, 0, 0]], 0),
    (identity(3), 3),
])
def test_rank_examples(M, r):
    assert rank(M) == r


@settings(max_examples=200)
@given(st.integers(1, 4), st.integers(1, 5), st.data())
def test_rank_matches_sympy(rows, cols, data):
    M = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=cols, max_size=cols),
                           min_size=rows, max_size=rows))
    assert rank(M) == sympy.Matrix(M).rank()


@pytest.mark.parametrize("C,z", [
    ([[1, -1]], [1, 1]),
    ([[1, 1, -1], [1, -1, 1]], [0, 1, 1]),
    # columns (1,1,1),(1,1,-1),(1,-1,1),(-1,1,1); generator +-(-1,1,1,1)
    ([[1, 1, 1, -1], [1, 1, -1, 1], [1, -1, 1, 1]], [1, -1, -1, -1]),
])
def test_kernel_examples(C, z):
    assert kernel_primitive(C) == z


def test_kernel_rank_deficient():
    with pytest.raises(RankError):
        kernel_primitive([[1, 1, 1], [1, 1, 1]])


def test_kernel_multiples_of_primitive():
    """Every small integral kernel vector found by enumeration is a multiple of z."""
    rng = random.Random(7)
    checked = 0
    while checked < 1000:
        d = rng.randint(1, 3)
        C = [[rng.choice((-1, 1)) for _ in range(d + 1)] for _ in range(d)]
        if rank(C) != d:
            continue
        z = kernel_primitive(C)
        assert all(sum(a * b for a, b in zip(row, z)) == 0 for row in C)
        g = 0
        for x in z:
            g = sympy.gcd(g, x)
        assert g == 1
        for x in itertools.product(range(-3, 4), repeat=d + 1):
            if any(x) and all(sum(a * b for a, b in zip(row, x)) == 0 for row in C):
                k = next(xi // zi for xi, zi in zip(x, z) if zi)
                assert list(x) == [k * zi for zi in z]
        checked += 1


def _vertex_oracle(A, b):
    """All basic feasible solutions by brute force over (free set, bound pattern)."""
    m, n = len(A), len(A[0])
    out = []
    for size in range(0, min(m, n) + 1):
        for free in itertools.combinations(range(n), size):
            sub = [[A[i][j] for j in free] for i in range(m)]
            if size and rank(sub) < size:
                continue
            rest = [j for j in range(n) if j not in free]
            for pattern in itertools.product((0, 1), repeat=len(rest)):
                rhs = [F(b[i]) - sum(A[i][j] * p for j, p in zip(rest, pattern)) for i in range(m)]
                sol = None
                if size:
                    try:
                        sol = sympy.Matrix(sub).gauss_jordan_solve(sympy.Matrix(rhs))[0]
                    except ValueError:
                        continue
                x = [F(0)] * n
                for j, p in zip(rest, pattern):
                    x[j] = F(p)
                if size:
                    if sol.free_symbols:
                        continue
                    for j, v in zip(free, sol):
                        x[j] = F(int(v.p), int(v.q))
                if all(0 <= v <= 1 for v in x) and all(
                        sum(A[i][j] * x[j] for j in range(n)) == b[i] for i in range(m)):
                    out.append(x)
    return out


def _is_vertex(A, x):
    frac = [j for j, v in enumerate(x) if 0 < v < 1]
    if not frac:
        return True
    return rank([[row[j] for j in frac] for row in A]) == len(frac)


def test_feasible_vertex_examples():
    assert feasible_vertex([[1, 1]], [1]) == [1, 0]
    assert feasible_vertex([[1]], [2]) is None
    A, b = [[1, 1, 1, 1], [1, -1, 1, -1]], [2, 0]
    x = feasible_vertex(A, b)
    assert sum(1 for v in x if v in (0, 1)) >= 2
    assert x in _vertex_oracle(A, b)


def test_feasible_vertex_dimension_mismatch():
    with pytest.raises(ValueError):
        feasible_vertex([[1, 1]], [1, 2])
    with pytest.raises(ValueError):
        feasible_vertex([[1, 1], [1]], [1, 2])


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 2), st.integers(1, 5), st.data())
def test_feasible_vertex_against_enumeration(m, n, data):
    A = data.draw(st.lists(st.lists(st.integers(-2, 2), min_size=n, max_size=n), min_size=m, max_size=m))
    b = data.draw(st.lists(st.fractions(-3, 3, max_denominator=3), min_size=m, max_size=m))
    start = data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    x = feasible_vertex(A, b, start=start)
    oracle = _vertex_oracle(A, b)
    if x is None:
        assert oracle == []
    else:
        assert all(0 <= v <= 1 for v in x)
        assert all(sum(a * v for a, v in zip(row, x)) == bi for row, bi in zip(A, b))
        assert _is_vertex(A, x)
        assert sum(1 for v in x if v in (0, 1)) >= n - m


def test_feasible_vertex_deterministic():
    A = [[1, 2, -1, 1, 0], [0, 1, 1, -1, 2]]
    b = [F(3, 2), 1]
    assert feasible_vertex(A, b) == feasible_vertex(A, b)
