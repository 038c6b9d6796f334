"""Order fidelity. The oracle here is a literal transcription of the
order definition as a sort key, kept independent of the block
combinatorics inside the implementation."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ellentuck import wellorder as wo
from ellentuck.errors import EmptySequenceError


def oracle_key(s):
    # empty first, then last entry, then lex with prefixes first;
    # plain tuple comparison already does prefix-first lex
    return (-1, ()) if not s else (s[-1], s)


def all_seqs(k, max_entry):
    out = [()]
    for length in range(1, k + 1):
        out.extend(itertools.combinations_with_replacement(range(max_entry + 1), length))
    return out


@pytest.mark.parametrize("k", [2, 3, 4])
def test_enumeration_matches_definition_sort(k):
    seqs = sorted(all_seqs(k, 6), key=oracle_key)
    assert wo.enumerate_le_k(k, len(seqs)) == seqs


def test_listing_k2():
    assert wo.enumerate_le_k(2, 10) == [
        (), (0,), (0, 0), (0, 1), (1,), (1, 1), (0, 2), (1, 2), (2,), (2, 2),
    ]
    assert wo.enumerate_le_k(2, 1) == [()]


def test_listing_k3():
    assert wo.enumerate_le_k(3, 19) == [
        (), (0,), (0, 0), (0, 0, 0), (0, 0, 1), (0, 1), (0, 1, 1), (1,),
        (1, 1), (1, 1, 1), (0, 0, 2), (0, 1, 2), (0, 2), (0, 2, 2),
        (1, 1, 2), (1, 2), (1, 2, 2), (2,), (2, 2),
    ]


def test_full_length_listings():
    assert wo.enumerate_k(2, 6) == [(0, 0), (0, 1), (1, 1), (0, 2), (1, 2), (2, 2)]
    assert wo.enumerate_k(3, 4) == [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)]
    assert wo.enumerate_k(2, 0) == []


@pytest.mark.parametrize("k", [2, 3])
def test_full_length_is_filtered_enumeration(k):
    le = wo.enumerate_le_k(k, 400)
    full = [s for s in le if len(s) == k]
    assert wo.enumerate_k(k, len(full) - 5)[: len(full) - 5] == full[: len(full) - 5]


def test_cmp_examples():
    assert wo.cmp_prec((1, 1), (0, 2)) == -1
    assert wo.cmp_prec((), (0,)) == -1
    assert wo.cmp_prec((2, 2), (2, 2)) == 0
    assert wo.cmp_prec((0, 2, 3), (0, 3)) == -1
    assert wo.cmp_prec((0, 3), (0, 2, 3)) == 1


def test_block_property():
    # every sequence with entries <= M precedes any with last entry > M
    seqs = wo.enumerate_le_k(2, 200)
    for m in range(5):
        idx = [i for i, s in enumerate(seqs) if s and max(s) <= m]
        others = [i for i, s in enumerate(seqs) if s and s[-1] > m]
        assert max(idx) < min(others)


def test_rank_examples():
    assert wo.rank_of((0,), 2) == 0
    assert wo.rank_of((0, 0), 2) == 1
    assert wo.rank_of((1,), 2) == 3
    assert wo.rank_of((0, 1, 1), 3) == 5
    assert wo.rank_of((5, 7), 2) == 40
    with pytest.raises(EmptySequenceError):
        wo.rank_of((), 2)


def test_seq_at_rank_examples():
    assert wo.seq_at_rank(0, 2) == (0,)
    assert wo.seq_at_rank(6, 2) == (1, 2)
    assert wo.seq_at_rank(18, 3) == (2, 2, 2)
    with pytest.raises(ValueError):
        wo.seq_at_rank(-1, 2)


@pytest.mark.parametrize("k", [2, 3])
def test_rank_round_trip(k):
    for r in range(10_000):
        assert wo.rank_of(wo.seq_at_rank(r, k), k) == r


@pytest.mark.parametrize("k", [2, 3])
def test_rank_agrees_with_enumeration(k):
    listing = wo.enumerate_le_k(k, 800)
    for i, s in enumerate(listing[1:]):
        assert wo.rank_of(s, k) == i
        assert wo.seq_at_rank(i, k) == s


@pytest.mark.parametrize("k", [2, 3])
def test_domain_round_trip(k):
    listing = wo.enumerate_k(k, 1500)
    for n, s in enumerate(listing):
        assert wo.domain_at(n, k) == s
        assert wo.domain_rank(s, k) == n


def _st_seq(k, hi):
    return st.lists(st.integers(0, hi), min_size=0, max_size=k).map(
        lambda xs: tuple(sorted(xs))
    )


@settings(max_examples=300)
@given(a=_st_seq(3, 12), b=_st_seq(3, 12), c=_st_seq(3, 12))
def test_cmp_is_a_total_order(a, b, c):
    ab, ba = wo.cmp_prec(a, b), wo.cmp_prec(b, a)
    assert ab == -ba
    assert (ab == 0) == (a == b)
    if ab <= 0 and wo.cmp_prec(b, c) <= 0:
        assert wo.cmp_prec(a, c) <= 0


@settings(max_examples=200)
@given(a=_st_seq(3, 9).filter(len), b=_st_seq(3, 9).filter(len))
def test_cmp_agrees_with_rank(a, b):
    ra, rb = wo.rank_of(a, 3), wo.rank_of(b, 3)
    assert wo.cmp_prec(a, b) == (ra > rb) - (ra < rb)


def test_classify_examples():
    assert wo.classify_n(2, 0) == 0
    assert wo.classify_n(2, 1) == 1
    assert wo.classify_n(3, 5) == 2
    assert wo.classify_n(3, 9) == 0
    assert wo.classify_n(3, 1) == 2


def test_classify_diagonal_k2():
    # for k=2 a step opens a fresh branch exactly at the diagonals (e,e)
    for n in range(200):
        s = wo.domain_at(n, 2)
        assert (wo.classify_n(2, n) == 0) == (s[0] == s[1])


def test_seq_str():
    assert wo.seq_str(()) == "()"
    assert wo.seq_str((2, 3)) == "(2,3)"
