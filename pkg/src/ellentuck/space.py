"""Prototype trees, finite approximations, and their validation.

A member is a function from full-length index sequences to tree nodes;
a node is the increasing tuple of ranks of the prefixes of a sequence.
Truncations keep the first n values in position order. Validation checks
the three tree conditions: nodes decode (i), branch maxima grow along
the order of the represented prefixes (ii), and node prefixes coincide
exactly when the underlying index prefixes do (iii).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    LevelOutOfRangeError,
    MalformedNodeError,
    TruncationExhaustedError,
)
from .wellorder import classify_n, domain_at, rank_of, seq_at_rank, seq_str

Node = tuple[int, ...]


def _as_node(node) -> Node:
    out = tuple(node)
    for v in out:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise MalformedNodeError(node, "indices must be nonnegative integers")
    return out


def _as_nodes(nodes):
    return tuple(_as_node(w) for w in nodes)


@dataclass(frozen=True)
class Approx:
    """A finite approximation: the first len(nodes) values of a member."""

    k: int
    nodes: tuple[Node, ...] = ()

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise ValueError(f"k must be an integer >= 2, got {self.k!r}")
        object.__setattr__(self, "nodes", _as_nodes(self.nodes))

    def __len__(self):
        return len(self.nodes)

    def max_index(self) -> int:
        """Largest index appearing in any node, -1 when empty."""
        return max((max(w) for w in self.nodes if w), default=-1)


@dataclass(frozen=True)
class Member(Approx):
    """A truncated member. declared_complete asserts nothing was cut off."""

    declared_complete: bool = False

    def approx(self) -> Approx:
        return Approx(self.k, self.nodes)


@lru_cache(maxsize=None)
def decode_node(node: Node, k: int):
    """The index sequence a node represents; raises MalformedNodeError."""
    if not node:
        raise MalformedNodeError(node, "empty node")
    if len(node) > k:
        raise MalformedNodeError(node, f"longer than k={k}")
    prev = None
    for q, r in enumerate(node):
        if not isinstance(r, int) or isinstance(r, bool) or r < 0:
            raise MalformedNodeError(node, "indices must be nonnegative integers")
        s = seq_at_rank(r, k)
        if len(s) != q + 1:
            raise MalformedNodeError(
                node, f"index {r} decodes to length {len(s)}, expected {q + 1}"
            )
        if prev is not None and s[: q] != prev:
            raise MalformedNodeError(node, f"prefix chain breaks at index {r}")
        prev = s
    return prev


def wk_node(seq, k=None) -> Node:
    """The prototype node over an index sequence: ranks of its prefixes."""
    s = tuple(seq)
    if k is None:
        k = len(s)
    if len(s) > k:
        raise ValueError(f"sequence longer than k={k}: {seq!r}")
    return tuple(rank_of(s[:p], k) for p in range(1, len(s) + 1))


@lru_cache(maxsize=None)
def build_w(k: int, n: int) -> Member:
    """The first n nodes of the prototype member for dimension k."""
    return Member(k, tuple(wk_node(domain_at(p, k), k) for p in range(n)))


def project(node, level) -> Node:
    """Initial segment of a node; level 0 projects to the empty tuple."""
    w = tuple(node)
    if not isinstance(level, int) or isinstance(level, bool) or not 0 <= level <= len(w):
        raise LevelOutOfRangeError(f"level {level!r} not in 0..{len(w)}")
    return w[:level]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    condition: str | None = None
    location: tuple | None = None
    message: str = "valid"

    def __bool__(self) -> bool:
        return self.ok


def validate_approx(x) -> ValidationReport:
    """Check the tree conditions; reports the first violation in order.

    Nodes that fail to decode raise MalformedNodeError. Structural
    violations come back as a report naming the condition ("ii" or
    "iii") and the index prefix where it shows.
    """
    k = x.k
    for node in x.nodes:
        if len(node) != k:
            raise MalformedNodeError(node, f"expected length {k}")
        decode_node(node, k)

    tree: dict[tuple, Node] = {}
    owner: dict[Node, tuple] = {}
    violations = []
    for p, node in enumerate(x.nodes):
        dom = domain_at(p, k)
        for l in range(1, k + 1):
            dkey, val = dom[:l], node[:l]
            seen = tree.get(dkey)
            if seen is None:
                tree[dkey] = val
            elif seen != val:
                violations.append((rank_of(dkey, k), "iii", dkey))
            own = owner.get(val)
            if own is None:
                owner[val] = dkey
            elif own != dkey:
                later = max(own, dkey, key=lambda s: rank_of(s, k))
                violations.append((rank_of(later, k), "iii", later))

    # the represented prefixes always form an initial segment of the
    # order, so comparing consecutive entries checks condition (ii)
    ordered = sorted(tree.items(), key=lambda kv: rank_of(kv[0], k))
    for (_, v1), (dkey, v2) in zip(ordered, ordered[1:]):
        if max(v1) >= max(v2):
            violations.append((rank_of(dkey, k), "ii", dkey))

    if violations:
        violations.sort(key=lambda t: (t[0], t[1]))
        _, cond, loc = violations[0]
        return ValidationReport(
            False, cond, loc, f"condition ({cond}) at {seq_str(loc)}"
        )
    return ValidationReport(True)


def r_approx(x, n: int) -> Approx:
    """The first n nodes as an approximation."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"length must be a nonnegative integer, got {n!r}")
    if n > len(x.nodes):
        raise TruncationExhaustedError(
            f"asked for {n} nodes, truncation holds {len(x.nodes)}"
        )
    return Approx(x.k, x.nodes[:n])


def le_fin(a, b) -> bool:
    """Range inclusion between approximations of the same dimension."""
    if a.k != b.k:
        raise ValueError("approximations live in different dimensions")
    return set(a.nodes) <= set(b.nodes)


def depth_of(X: Member, a) -> int | float:
    """Least n with ran(a) inside the first n nodes of X.

    Returns math.inf when a is not inside X and X is declared complete;
    raises TruncationExhaustedError when the truncation cannot decide.
    """
    if a.k != X.k:
        raise ValueError("dimension mismatch")
    if not a.nodes:
        return 0
    pos = {w: i for i, w in enumerate(X.nodes)}
    try:
        return 1 + max(pos[w] for w in a.nodes)
    except KeyError:
        if getattr(X, "declared_complete", False):
            return math.inf
        raise TruncationExhaustedError(
            "approximation not inside the truncation; member not declared complete"
        ) from None


@lru_cache(maxsize=None)
def position_info(k: int, n: int):
    """(level, anchor) for step n: the forced prefix length and the
    earliest earlier position sharing it (None at level 0)."""
    l = classify_n(k, n)
    if l == 0:
        return 0, None
    head = domain_at(n, k)[:l]
    for p in range(n):
        if domain_at(p, k)[:l] == head:
            return l, p
    raise AssertionError("forced prefix must occur earlier")  # pragma: no cover


def admits(a: Approx, w: Node) -> bool:
    """Whether appending w to a yields a valid one-step extension."""
    n = len(a.nodes)
    l, anchor = position_info(a.k, n)
    maxi = a.max_index()
    if len(w) != a.k:
        return False
    if l == 0:
        return w[0] > maxi
    return w[:l] == a.nodes[anchor][:l] and w[l] > maxi


def one_extensions(a: Approx, X) -> list[Approx]:
    """All one-step extensions of a drawing their new node from X,
    ascending by the new node's maximum."""
    if a.k != X.k:
        raise ValueError("dimension mismatch")
    n = len(a.nodes)
    l, anchor = position_info(a.k, n)
    maxi = a.max_index()
    head = a.nodes[anchor][:l] if l else None
    picked = []
    for w in X.nodes:
        if l == 0:
            ok = w[0] > maxi
        else:
            ok = w[:l] == head and w[l] > maxi
        if ok:
            picked.append(w)
    picked.sort(key=max)
    return [Approx(a.k, a.nodes + (w,)) for w in picked]


def tail_after(X, s) -> list[Node]:
    """Nodes of X whose maximum exceeds every index of s."""
    cut = s.max_index()
    return [w for w in X.nodes if max(w) > cut]


def basic_set_contains(a: Approx, B, X) -> bool:
    """Whether X starts with a and stays inside B's node range."""
    if a.k != B.k or a.k != X.k:
        raise ValueError("dimension mismatch")
    n = len(a.nodes)
    if len(X.nodes) < n or X.nodes[:n] != a.nodes:
        return False
    return set(X.nodes) <= set(B.nodes)
