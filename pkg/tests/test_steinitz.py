from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxseq.box import VectorSequence
from boxseq.samples import random_box_sequence
from boxseq.steinitz import steinitz_order, verify_certificates, verify_prefix_bound


@st.composite
def zero_sum_sequences(draw, max_d=4, max_n=14):
    d = draw(st.integers(1, max_d))
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_box_sequence(np.random.default_rng(seed), d, n, max_den=12, zero_sum=True)


def test_prefix_bound_example():
    V = VectorSequence(2, [(1, 1), (-1, -1), (1, -1), (-1, 1)])
    ordering = steinitz_order(V)
    assert sorted(ordering.permutation) == [0, 1, 2, 3]
    assert all(x <= 2 for x in ordering.prefix_norms)
    assert ordering.prefix_norms[-1] == 0


@settings(max_examples=150, deadline=None)
@given(zero_sum_sequences())
def test_steinitz_invariants(V):
    ordering = steinitz_order(V)
    assert sorted(ordering.permutation) == list(range(V.t))
    assert verify_prefix_bound(ordering, V, V.dim)
    assert verify_certificates(ordering, V)
    assert ordering.prefix_norms[-1] == 0


@settings(max_examples=30, deadline=None)
@given(zero_sum_sequences(max_d=3, max_n=10))
def test_steinitz_deterministic(V):
    assert steinitz_order(V).permutation == steinitz_order(V).permutation


def test_short_sequence_identity():
    V = VectorSequence(3, [(1, 0, 0), (-1, 0, 0)])
    assert steinitz_order(V).permutation == [0, 1]


def test_empty():
    assert steinitz_order(VectorSequence(2, [])).permutation == []


def test_rejects_nonzero_sum():
    with pytest.raises(ValueError):
        steinitz_order(VectorSequence(1, [(1,), (F(1, 2),)]))


def test_rejects_outside_box():
    with pytest.raises(ValueError):
        steinitz_order(VectorSequence(1, [(2,), (-2,)]))


def test_verify_rejects_non_permutation():
    V = VectorSequence(1, [(1,), (-1,)])
    ordering = steinitz_order(V)
    ordering.permutation = [0, 0]
    with pytest.raises(ValueError):
        verify_prefix_bound(ordering, V, 1)


def test_verify_detects_bad_order():
    V = VectorSequence(1, [(1,), (1,), (-1,), (-1,)])
    ordering = steinitz_order(V)
    assert verify_prefix_bound(ordering, V, 1)
    ordering.permutation = [0, 1, 2, 3]
    assert not verify_prefix_bound(ordering, V, 1)
