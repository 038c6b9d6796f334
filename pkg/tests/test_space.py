import math
import random

import pytest

from ellentuck import wellorder as wo
from ellentuck.errors import (
    LevelOutOfRangeError,
    MalformedNodeError,
    TruncationExhaustedError,
)
from ellentuck.space import (
    Approx,
    Member,
    basic_set_contains,
    build_w,
    decode_node,
    depth_of,
    le_fin,
    one_extensions,
    project,
    r_approx,
    tail_after,
    validate_approx,
    wk_node,
)

from figures import R4_E3, R5_E3, R6_E2, R10_E2, W2_LEAVES, W3_LEAVES
from helpers import oracle_extensions, oracle_level, random_sub_member, sub_approxs_up_to


def approx(k, nodes):
    return Approx(k, tuple(tuple(w) for w in nodes))


def member(k, nodes, complete=False):
    return Member(k, tuple(tuple(w) for w in nodes), complete)


# ---------------------------------------------------------------- nodes


def test_wk_node_examples():
    assert wk_node((0, 0)) == (0, 1)
    assert wk_node((1, 2)) == (3, 6)
    assert wk_node((0, 1, 2)) == (0, 4, 10)
    assert wk_node(()) == ()


def test_decode_inverts_wk_node():
    for k in (2, 3):
        for n in range(120):
            s = wo.domain_at(n, k)
            assert decode_node(wk_node(s, k), k) == s


def test_decode_rejects_garbage():
    with pytest.raises(MalformedNodeError):
        decode_node((1, 2), 2)  # 1 already has length 2
    with pytest.raises(MalformedNodeError):
        decode_node((0, 3), 2)  # 3 decodes to a length-1 sequence
    with pytest.raises(MalformedNodeError):
        decode_node((0, 4, 9), 3)  # (0,1) then (0,0,2): chain breaks
    with pytest.raises(MalformedNodeError):
        decode_node((), 2)


def test_project_examples():
    assert project((3, 6), 1) == (3,)
    assert project((0, 4, 10), 2) == (0, 4)
    assert project((3, 6), 0) == ()
    with pytest.raises(LevelOutOfRangeError):
        project((3, 6), 3)
    with pytest.raises(LevelOutOfRangeError):
        project((3, 6), -1)


# ------------------------------------------------------------ prototype


def test_build_w_matches_figures():
    assert list(build_w(2, 15).nodes) == W2_LEAVES
    assert list(build_w(3, 20).nodes) == W3_LEAVES
    assert build_w(2, 0).nodes == ()


@pytest.mark.parametrize("k", [2, 3, 4])
def test_build_w_validates(k):
    assert validate_approx(build_w(k, 500)).ok


@pytest.mark.parametrize("k", [2, 3])
def test_build_w_tree_is_bijective(k):
    x = build_w(k, 300)
    fwd, bwd = {}, {}
    for p, node in enumerate(x.nodes):
        dom = wo.domain_at(p, k)
        for l in range(1, k + 1):
            fwd[dom[:l]] = node[:l]
            bwd[node[:l]] = dom[:l]
    assert len(fwd) == len(bwd)
    assert all(bwd[v] == d for d, v in fwd.items())


# ------------------------------------------------------------ validation


def test_validate_figures():
    assert validate_approx(approx(2, R6_E2)).ok
    assert validate_approx(approx(3, R4_E3)).ok
    assert validate_approx(approx(3, R5_E3)).ok


def test_validate_flags_the_broken_figure():
    report = validate_approx(approx(2, R10_E2))
    assert not report.ok
    assert report.condition == "ii"
    assert report.location == (2, 3)
    assert "(ii) at (2,3)" in report.message


def test_validate_small_cases():
    assert validate_approx(approx(2, [(0, 1)])).ok
    assert validate_approx(approx(2, [])).ok
    assert validate_approx(approx(2, [(3, 6)])).ok


def test_validate_condition_iii():
    # second node jumps to a fresh branch while its domain stays on the first,
    # so the induced prefix map stops being a function
    report = validate_approx(approx(2, [(0, 1), (3, 6)]))
    assert not report.ok
    assert report.condition == "iii"
    assert report.location == (0,)


def test_validate_rejects_malformed():
    with pytest.raises(MalformedNodeError):
        validate_approx(approx(2, [(0, 1), (1, 2)]))
    with pytest.raises(MalformedNodeError):
        validate_approx(approx(2, [(0, 1, 4)]))  # wrong length for k=2


def test_validate_reports_least_location():
    # max violations at (0,1) and (0,2) plus a reuse at (0,2); the
    # earliest prefix in the order is the one reported
    bad = [(0, 5), (0, 2), (7, 8), (0, 5)]
    report = validate_approx(approx(2, bad))
    assert not report.ok
    assert report.condition == "ii"
    assert report.location == (0, 1)


# --------------------------------------------------------- restrictions


def test_r_approx_and_monotone():
    x = build_w(2, 15)
    assert r_approx(x, 0).nodes == ()
    assert list(r_approx(x, 4).nodes) == W2_LEAVES[:4]
    with pytest.raises(TruncationExhaustedError):
        r_approx(x, 16)
    for m in range(15):
        assert le_fin(r_approx(x, m), r_approx(x, m + 1))


def test_le_fin_oracle_and_order():
    x = build_w(2, 30)
    pool = sub_approxs_up_to(x, 3)
    rng = random.Random(7)
    sample = rng.sample(pool, 120)
    for a in sample:
        assert le_fin(a, a)
    for _ in range(4000):
        a, b = rng.choice(pool), rng.choice(pool)
        assert le_fin(a, b) == (frozenset(a.nodes) <= frozenset(b.nodes))
        if le_fin(a, b) and le_fin(b, a):
            assert set(a.nodes) == set(b.nodes)
    with pytest.raises(ValueError):
        le_fin(Approx(2), Approx(3))


def test_depth_examples():
    w40 = build_w(2, 40)
    assert depth_of(w40, approx(2, [(3, 6)])) == 5
    x = build_w(2, 15)
    assert depth_of(x, r_approx(x, 3)) == 3
    assert depth_of(x, Approx(2)) == 0
    complete = member(2, W2_LEAVES, complete=True)
    assert depth_of(complete, approx(2, [wk_node((9, 9), 2)])) == math.inf
    with pytest.raises(TruncationExhaustedError):
        depth_of(x, approx(2, [wk_node((9, 9), 2)]))


# ------------------------------------------------------------ extensions


def test_one_extensions_examples():
    x = build_w(2, 15)
    assert len(one_extensions(Approx(2), x)) == 15
    exts = one_extensions(approx(2, [(0, 1)]), x)
    assert [b.nodes[-1] for b in exts] == [(0, 2), (0, 5), (0, 9), (0, 14)]
    # fresh-branch step: any node opening a new branch above the maximum
    exts2 = one_extensions(approx(2, [(0, 1), (0, 2)]), x)
    assert [b.nodes[-1] for b in exts2] == [
        (3, 4), (3, 6), (7, 8), (3, 10), (7, 11),
        (12, 13), (3, 15), (7, 16), (12, 17), (18, 19),
    ]


@pytest.mark.parametrize("k,n", [(2, 60), (3, 60)])
def test_one_extensions_agree_with_revalidation_oracle(k, n):
    x = build_w(k, n)
    rng = random.Random(11)
    approxes = [r_approx(x, m) for m in (0, 1, 2, 3, 5)]
    for _ in range(6):
        y = random_sub_member(x, 4, rng)
        if y is not None:
            approxes.append(Approx(k, y.nodes))
    for a in approxes:
        got = one_extensions(a, x)
        want = oracle_extensions(a, x)
        assert [b.nodes for b in got] == [b.nodes for b in want]
        for b in got:
            assert validate_approx(b).ok
            assert b.nodes[: len(a)] == a.nodes


@pytest.mark.parametrize("k", [2, 3])
def test_classify_matches_definitional_oracle_small(k):
    x = build_w(k, 300)
    for n in range(25):
        levels = oracle_level(r_approx(x, n), x)
        assert levels == [wo.classify_n(k, n)]


# ------------------------------------------------------------- tails


def test_tail_after():
    x = build_w(2, 15)
    a = approx(2, [(0, 1), (0, 2)])
    tail = tail_after(x, a)
    assert len(tail) == 13
    assert all(max(w) > 2 for w in tail)
    assert tail_after(x, Approx(2)) == list(x.nodes)
    assert tail_after(x, r_approx(x, 15)) == []


def test_basic_set_contains():
    w = build_w(2, 15)
    a = r_approx(w, 2)
    assert basic_set_contains(a, w, w)
    assert basic_set_contains(a, build_w(2, 20), w)
    assert not basic_set_contains(a, r_approx(w, 5), w)  # range escapes
    other = member(2, [(0, 1), (0, 5)])
    assert not basic_set_contains(a, w, other)  # wrong prefix
