"""Constructive algorithms over truncated members.

Greedy construction inside a basic set, fusion of two members across a
depth boundary, dense embedding against a node oracle, and subcopy
isomorphism checks with the thinning construction built on top of them.
All searches here are greedy and deterministic; shortfalls of the
truncated data come back as Exhausted values, never exceptions.
"""

from __future__ import annotations

import math

from .errors import Exhausted, LevelOutOfRangeError, MalformedNodeError, NotIsomorphic
from .space import (
    Approx,
    Member,
    _as_node,
    decode_node,
    depth_of,
    one_extensions,
    position_info,
    validate_approx,
)
from .wellorder import domain_at


class NodeOracle:
    """Deterministic availability filter over full-length nodes.

    Backed by an explicit node collection, or by a predicate over a
    candidate universe. Candidates are deduplicated and kept in
    ascending order of their maximum index, which for decodable nodes
    is the order of the sequences they stand for.
    """

    def __init__(self, nodes=None, predicate=None, universe=None):
        if nodes is not None and predicate is not None:
            raise ValueError("give an explicit node set or a predicate, not both")
        if nodes is None and (predicate is None or universe is None):
            raise ValueError("need nodes, or a predicate together with a universe")
        if nodes is not None:
            pool = [_as_node(w) for w in nodes]
        else:
            pool = [w for w in (_as_node(u) for u in universe) if predicate(w)]
        seen = set()
        kept = []
        for w in pool:
            if w not in seen:
                seen.add(w)
                kept.append(w)
        kept.sort(key=lambda w: (max(w), w))
        self._candidates = tuple(kept)
        self._members = frozenset(kept)

    @classmethod
    def from_member(cls, x) -> "NodeOracle":
        return cls(nodes=x.nodes)

    def available(self, w) -> bool:
        return tuple(w) in self._members

    def candidates(self) -> tuple:
        return self._candidates


def _require_valid(a, what="approximation"):
    report = validate_approx(a)
    if not report.ok:
        raise ValueError(f"{what} does not validate: {report.message}")


def construct_in_basic_set(a, A, target_len: int):
    """Extend a to target_len nodes drawing from A, greedily.

    Every step appends the least admissible node of A (least by its
    maximum index, which orders A's nodes the same way their sequences
    are ordered). Returns the extended approximation, or Exhausted when
    A's truncation runs out of admissible nodes.
    """
    if a.k != A.k:
        raise ValueError("dimension mismatch")
    if not isinstance(target_len, int) or target_len < 0:
        raise ValueError(f"target length must be a nonnegative integer, got {target_len!r}")
    if target_len < len(a.nodes):
        raise ValueError("target length is shorter than the input")
    d = depth_of(A, a)
    if not math.isfinite(d):
        raise ValueError("approximation does not sit inside the member")
    _require_valid(a)
    cur = Approx(a.k, a.nodes)
    while len(cur.nodes) < target_len:
        exts = one_extensions(cur, A)
        if not exts:
            return Exhausted("supply", f"no admissible node at step {len(cur.nodes)}")
        cur = exts[0]
    return cur


def fuse(a, A, B, target_len: int):
    """Build a member that restricts to B's depth prefix but funnels
    every extension of a through A.

    A must sit inside B and a must draw its nodes from A. The result
    keeps the first depth(B, a) nodes of B verbatim; beyond the depth,
    fresh branches and branches descending through a come from A, and
    branches that exist only to preserve the prefix shape are continued
    from B. The payoff, checkable by enumeration: any chain of
    extensions of a inside the result only ever uses A's nodes.
    """
    if not (a.k == A.k == B.k):
        raise ValueError("dimension mismatch")
    if not isinstance(target_len, int) or target_len < 0:
        raise ValueError(f"target length must be a nonnegative integer, got {target_len!r}")
    if not set(A.nodes) <= set(B.nodes):
        raise ValueError("the inner member must sit inside the ambient one")
    if not set(a.nodes) <= set(A.nodes):
        raise ValueError("the approximation must draw its nodes from the inner member")
    _require_valid(a)
    k = a.k
    d = depth_of(B, a)
    if target_len < d:
        raise ValueError(f"target length {target_len} is shorter than the depth {d}")

    a_prefixes = {w[:l] for w in a.nodes for l in range(1, k + 1)}
    inner_prefixes = {w[:l] for w in A.nodes for l in range(1, k + 1)}
    inner_pool = sorted(set(A.nodes), key=max)
    ambient_pool = sorted(set(B.nodes), key=max)

    nodes = list(B.nodes[:d])
    maxi = max((max(w) for w in nodes), default=-1)
    while len(nodes) < target_len:
        n = len(nodes)
        l, anchor = position_info(k, n)
        if l == 0:
            pool, prefix = inner_pool, None
        else:
            prefix = nodes[anchor][:l]
            if anchor < d:
                use_inner = prefix in a_prefixes
            else:
                use_inner = prefix in inner_prefixes
            pool = inner_pool if use_inner else ambient_pool
        picked = _pick(pool, l, prefix, maxi)
        if picked is None:
            side = "inner" if pool is inner_pool else "ambient"
            return Exhausted("supply", f"step {n}: the {side} member has no fitting node")
        nodes.append(picked)
        maxi = max(maxi, max(picked))
    return Member(k, tuple(nodes))


def dense_embed(k: int, oracle: NodeOracle, target_len: int):
    """Greedy valid approximation using only oracle-available nodes.

    Candidates that fail to decode raise MalformedNodeError up front;
    a step with no admissible available node returns Exhausted.
    """
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if not isinstance(target_len, int) or target_len < 0:
        raise ValueError(f"target length must be a nonnegative integer, got {target_len!r}")
    candidates = []
    for w in oracle.candidates():
        if len(w) != k:
            raise MalformedNodeError(w, f"expected length {k}")
        decode_node(w, k)
        candidates.append(w)

    nodes: list = []
    maxi = -1
    while len(nodes) < target_len:
        n = len(nodes)
        l, anchor = position_info(k, n)
        prefix = nodes[anchor][:l] if l else None
        picked = _pick(candidates, l, prefix, maxi)
        if picked is None:
            return Exhausted("supply", f"oracle denies every candidate at step {n}")
        nodes.append(picked)
        maxi = max(maxi, max(picked))
    return Approx(k, tuple(nodes))


def subcopy_check(U, k: int, level: int):
    """Test whether U, read above `level`, looks like an initial piece
    of the (k-level)-dimensional node tree.

    U is a collection of full-length decodable nodes. They are sorted
    by the order of their sequences and compared position by position
    against the first len(U) full-length sequences of dimension
    k-level: two nodes must agree on a prefix exactly when their
    targets do. On success returns the mapping from each node to its
    target sequence; on failure returns NotIsomorphic. At level >= 1
    the check forces all of U into a single level-`level` block.
    """
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if not isinstance(level, int) or isinstance(level, bool) or not 0 <= level < k:
        raise LevelOutOfRangeError(f"level {level!r} not in 0..{k - 1}")
    seen = set()
    nodes = []
    for w in U:
        w = _as_node(w)
        if len(w) != k:
            raise MalformedNodeError(w, f"expected length {k}")
        decode_node(w, k)
        if w not in seen:
            seen.add(w)
            nodes.append(w)
    if not nodes:
        raise ValueError("need at least one node to compare")
    nodes.sort(key=max)
    seqs = [decode_node(w, k) for w in nodes]
    dim = k - level
    targets = [domain_at(m, dim) for m in range(len(nodes))]
    for m2 in range(len(nodes)):
        for m1 in range(m2):
            for q in range(dim + 1):
                here = seqs[m1][: level + q] == seqs[m2][: level + q]
                there = targets[m1][:q] == targets[m2][:q]
                if here != there:
                    return NotIsomorphic(
                        f"prefix agreement at depth {level + q} differs between "
                        f"positions {m1} and {m2}"
                    )
    return {nodes[m]: targets[m] for m in range(len(nodes))}


def _new_nodes_of(a, V):
    """Validate V as one-step extensions of a; return their new nodes."""
    n = len(a.nodes)
    seen = set()
    out = []
    for v in V:
        if not isinstance(v, Approx):
            v = Approx(a.k, v)
        if v.k != a.k or len(v.nodes) != n + 1 or v.nodes[:n] != a.nodes:
            raise ValueError("every entry of V must be a one-step extension of a")
        _require_valid(v, "extension in V")
        w = v.nodes[-1]
        if w not in seen:
            seen.add(w)
            out.append(w)
    return out


def thin_to_subcopy(a, X, V, target_len: int):
    """Thin X to a member Y extending a whose one-step extensions of a
    all land in V.

    V lists admitted one-step extensions of a. When the step after a
    continues an existing branch, V's new nodes must form a subcopy at
    that branch level and Y's whole branch is drawn from them. When the
    step opens fresh branches, V's new nodes are grouped into blocks by
    their first index; blocks that fail the level-1 subcopy check are
    unusable, and every fresh branch of Y is built inside a single
    usable block. Branch positions invisible to extensions of a are
    filled greedily from X. The certificate is enforced before
    returning: enumerating the one-step extensions of a inside Y yields
    a subset of V.
    """
    if a.k != X.k:
        raise ValueError("dimension mismatch")
    if not isinstance(target_len, int) or target_len < 0:
        raise ValueError(f"target length must be a nonnegative integer, got {target_len!r}")
    if target_len < len(a.nodes):
        raise ValueError("target length is shorter than the input")
    _require_valid(a)
    k = a.k
    n = len(a.nodes)
    wanted = _new_nodes_of(a, V)
    in_x = set(X.nodes)
    usable = [w for w in wanted if w in in_x]
    usable.sort(key=max)
    level = position_info(k, n)[0]

    x_pool = sorted(set(X.nodes), key=max)
    max_a = a.max_index()
    nodes = list(a.nodes)
    maxi = max_a

    if level >= 1:
        if usable:
            verdict = subcopy_check(usable, k, level)
            if isinstance(verdict, NotIsomorphic):
                raise ValueError(f"V's new nodes are not a subcopy above level {level}: {verdict.reason}")
        branch_dom = domain_at(n, k)[:level]
        a_deep = {w[: level + 1] for w in a.nodes}
        while len(nodes) < target_len:
            p = len(nodes)
            l, anchor = position_info(k, p)
            prefix = nodes[anchor][:l] if l else None
            # a position holds a one-step extension of a exactly when it
            # sits on a's branch and its node does not continue one of
            # a's own deeper prefixes (those have too-small indices at
            # the branching level to count as extensions)
            constrained = domain_at(p, k)[:level] == branch_dom and (
                l == level or nodes[anchor][: level + 1] not in a_deep
            )
            pool = usable if constrained else x_pool
            picked = _pick(pool, l, prefix, maxi)
            if picked is None:
                return Exhausted("supply", f"step {p}: no fitting node")
            nodes.append(picked)
            maxi = max(maxi, max(picked))
    else:
        blocks: dict = {}
        for w in usable:
            blocks.setdefault(w[0], []).append(w)
        good_blocks = {
            h: blk
            for h, blk in blocks.items()
            if not isinstance(subcopy_check(blk, k, 1), NotIsomorphic)
        }
        fresh_pool = sorted((w for blk in good_blocks.values() for w in blk), key=max)
        while len(nodes) < target_len:
            p = len(nodes)
            l, anchor = position_info(k, p)
            if l == 0:
                picked = _pick(fresh_pool, 0, None, maxi)
            else:
                prefix = nodes[anchor][:l]
                if prefix[0] > max_a:
                    pool = good_blocks.get(prefix[0], ())
                else:
                    pool = x_pool
                picked = _pick(pool, l, prefix, maxi)
            if picked is None:
                return Exhausted("supply", f"step {p}: no fitting node")
            nodes.append(picked)
            maxi = max(maxi, max(picked))

    result = Member(k, tuple(nodes))
    allowed = set(wanted)
    for b in one_extensions(a, result):
        if b.nodes[-1] not in allowed:
            raise AssertionError("thinning certificate failed; this is a bug")
    return result


def _pick(pool, l, prefix, maxi):
    """Least node in pool admissible at a step with the given forced
    prefix (None for a fresh-branch step) and running maximum."""
    for w in pool:
        if prefix is None:
            if w[0] > maxi:
                return w
        elif w[:l] == prefix and w[l] > maxi:
            return w
    return None
