import itertools
import json
import time
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from boxseq.box import (
    BudgetExceeded,
    VectorSequence,
    VerificationReport,
    in_box,
    is_tau_witness,
    kstar_check,
    min_box_subset,
    minimal_multiset_enum,
    subseq_sum,
    sum_check,
)


def naive_min_subset(vectors):
    """Smallest proper subset (2 <= |S| < t) with sum in the box, lexicographically first."""
    t = len(vectors)
    for k in range(2, t):
        for S in itertools.combinations(range(t), k):
            if in_box([sum(vectors[i][c] for i in S) for c in range(len(vectors[0]))]):
                return k, list(S)
    return None, None


rationals = st.fractions(-1, 1, max_denominator=6)


def sequences(max_t=8, max_d=3):
    return st.integers(1, max_d).flatmap(lambda d: st.lists(
        st.tuples(*[rationals] * d), min_size=1, max_size=max_t).map(lambda v: VectorSequence(d, v)))


def test_tau3_golden(tau3):
    rep = is_tau_witness(tau3)
    assert rep.passed and rep.witness is None
    assert tau3.total() == (F(2, 3), F(2, 3), F(-2, 3))


def test_pair_fails():
    seq = VectorSequence(2, [(1, 0), (-1, 0), (F(1, 2), 0)])
    rep = is_tau_witness(seq)
    assert not rep.passed and rep.witness == [0, 1] and rep.min_size == 2


def test_sum_outside_box():
    seq = VectorSequence(1, [(1,), (1,)])
    rep = is_tau_witness(seq)
    assert not rep.passed and rep.witness is None
    assert not sum_check(seq).passed


def test_sum_outside_box_still_reports_short_subset(tau3):
    vecs = list(tau3.vectors)
    vecs[0] = (0, 0, 0)
    rep = is_tau_witness(VectorSequence(3, vecs))
    assert not rep.passed and rep.min_size == 2 and rep.witness == [0, 1]


def test_vector_outside_box_rejected_by_sum_check():
    seq = VectorSequence(1, [(F(3, 2),), (-1,)])
    rep = sum_check(seq)
    assert not rep.passed and rep.witness == [0]


def test_short_sequences():
    assert not is_tau_witness(VectorSequence(1, [(F(1, 2),)])).passed
    assert is_tau_witness(VectorSequence(1, [(1,), (-1,)])).passed


@settings(max_examples=300, deadline=None)
@given(sequences())
def test_min_subset_matches_naive(seq):
    k, S = naive_min_subset(seq.vectors)
    rep = min_box_subset(seq)
    if k is None:
        assert rep.passed
    else:
        assert not rep.passed and rep.min_size == k and rep.witness == S
        assert in_box(subseq_sum(seq, rep.witness))
        # canonical witness: identical vectors are used in index order
        assert rep.witness == sorted(rep.witness)


@settings(max_examples=100, deadline=None)
@given(sequences(max_t=6, max_d=2), st.randoms(use_true_random=False))
def test_witness_invariant_under_permutation(seq, rnd):
    vecs = list(seq.vectors)
    rnd.shuffle(vecs)
    assert is_tau_witness(seq).passed == is_tau_witness(VectorSequence(seq.dim, vecs)).passed


@settings(max_examples=100, deadline=None)
@given(sequences(max_t=6, max_d=2))
def test_min_subset_invariant_under_negation(seq):
    neg = VectorSequence(seq.dim, [tuple(-c for c in v) for v in seq.vectors])
    assert min_box_subset(seq).min_size == min_box_subset(neg).min_size


def test_subseq_sum_bad_index(tau3):
    with pytest.raises(IndexError):
        subseq_sum(tau3, [0, 9])


def test_subset_limit():
    seq = VectorSequence(1, [(F(1, k + 2),) for k in range(12)])
    with pytest.raises(BudgetExceeded):
        min_box_subset(seq, limit=10)
    # repeated vectors only cost (count + 1) patterns
    rep = min_box_subset(VectorSequence(1, [(F(1, 3),)] * 40), limit=6)
    assert rep.min_size == 2


def test_large_entries_use_object_path():
    big = F(1, 2**62 + 1)
    seq = VectorSequence(2, [(1, big), (-1, -big), (1, 1)])
    assert min_box_subset(seq).min_size == 2


def test_json_roundtrip(tau3):
    text = tau3.to_json()
    back = VectorSequence.from_json(text)
    assert back.vectors == tau3.vectors and back.dim == 3
    assert json.loads(text)["vectors"][0] == ["1", "1", "2/3"]


@pytest.mark.parametrize("bad", [
    {"dim": 2, "vectors": [["1", "0"], ["1"]]},
    {"dim": 1, "vectors": [["1/0"]]},
    {"dim": 1, "vectors": [[0.5]]},
    {"dim": 1, "vectors": [["1/2"]], "meta": {"all_pm1": True}},
])
def test_from_dict_rejects(bad):
    with pytest.raises(ValueError):
        VectorSequence.from_dict(bad)


def test_report_roundtrip():
    rep = VerificationReport("min_subset", False, [0, 1], 2, "x")
    assert VerificationReport.from_dict(rep.to_dict()) == rep


def test_grouped_witness_on_c2_output():
    seq = VectorSequence(3, [(1, 1, 1)] * 4 + [(-1, -1, -1)] * 4)
    rep = min_box_subset(seq)
    assert rep.min_size == 2 and rep.witness == [0, 4]


def test_kstar_fails_on_cancelling_pair():
    seq = VectorSequence(2, [(1, 1), (1, 1), (-1, -1), (-1, -1)])
    rep = kstar_check(seq)
    assert not rep.passed


def test_kstar_requires_length():
    with pytest.raises(ValueError):
        kstar_check(VectorSequence(1, [(1,), (-1,), (F(1, 2),)]))


def naive_kstar(seq):
    distinct = sorted(set(seq.vectors))
    s = seq.total()
    h = seq.t // 2
    for q in itertools.product(range(h + 1), repeat=len(distinct)):
        if 1 <= sum(q) <= h:
            rest = [s[c] - sum(qi * v[c] for qi, v in zip(q, distinct)) for c in range(seq.dim)]
            if in_box(rest):
                return False
    return True


@settings(max_examples=60, deadline=None)
@given(sequences(max_t=6, max_d=2))
def test_kstar_matches_naive(seq):
    if seq.t < 4 or not is_tau_witness(seq).passed:
        return
    rep = kstar_check(seq)
    assert rep.passed == naive_kstar(seq)
    if not rep.passed:
        q = rep.witness
        rest = [seq.total()[c] - sum(qi * v[c] for qi, v in zip(q, seq.vectors)) for c in range(seq.dim)]
        assert in_box(rest) and 1 <= sum(q) <= seq.t // 2


def test_kstar_budget():
    from boxseq.constructions import construct_one
    from boxseq.signmatrix import search_rect, verify_rect
    seq = construct_one(verify_rect(search_rect(3).matrix).matrix).seq
    with pytest.raises(BudgetExceeded):
        kstar_check(seq, budget=3)
    assert kstar_check(seq).passed


def naive_minimal_multisets(m, N, t_max):
    grid = [v for v in itertools.product(range(-N, N + 1), repeat=m) if any(v)]
    out = set()
    for t in range(2, t_max + 1):
        for ms in itertools.combinations_with_replacement(range(len(grid)), t):
            vs = [grid[i] for i in ms]
            if not all(abs(sum(v[c] for v in vs)) <= N for c in range(m)):
                continue
            ok = True
            for k in range(2, t):
                for sub in itertools.combinations(vs, k):
                    if all(abs(sum(v[c] for v in sub)) <= N for c in range(m)):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                out.add(tuple(sorted(vs)))
    return out


@pytest.mark.parametrize("m,N,t_max", [(1, 1, 4), (1, 2, 5), (1, 3, 4), (2, 1, 4)])
def test_enum_matches_naive(m, N, t_max):
    got = {tuple(sorted(tuple(int(c) for c in v) for v in s.vectors))
           for s in minimal_multiset_enum(m, N, t_max)}
    assert got == naive_minimal_multisets(m, N, t_max)


def test_enum_sorted_and_tagged():
    res = minimal_multiset_enum(1, 2, 4)
    assert [s.t for s in res] == sorted(s.t for s in res)
    assert all(s.meta["kind"] == "subadditive_minimal" for s in res)


@pytest.mark.parametrize("args", [(3, 1, 4), (1, 5, 4), (1, 1, 9), (1, 1, 1)])
def test_enum_limits(args):
    with pytest.raises(ValueError):
        minimal_multiset_enum(*args)


@pytest.mark.slow
def test_enum_largest_case_finishes():
    t0 = time.perf_counter()
    res = minimal_multiset_enum(2, 4, 8)
    assert res and time.perf_counter() - t0 < 120
    assert max(s.t for s in res) == 2
