import sys
from fractions import Fraction as F

import pytest

from boxseq.box import VectorSequence

TAU3_VECTORS = [
    (1, 1, F(2, 3)),
    (1, F(-2, 3), -1),
    (F(-2, 3), 1, -1),
    (F(-2, 3), F(-2, 3), F(2, 3)),
]


@pytest.fixture
def tau3():
    return VectorSequence(3, TAU3_VECTORS)


def det_cofactor(M):
    """Laplace expansion along the first row; independent of Bareiss."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        total += (-1) ** j * M[0][j] * det_cofactor(minor)
    return total


def adj_cofactor(M):
    n = len(M)
    if n == 1:
        return [[1]]
    return [
        [(-1) ** (i + j) * det_cofactor([r[:i] + r[i + 1:] for k, r in enumerate(M) if k != j])
         for j in range(n)]
        for i in range(n)
    ]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
