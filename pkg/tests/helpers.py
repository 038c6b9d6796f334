"""Shared test utilities: independent oracles and random data builders.

The oracles here deliberately avoid the fast paths in the package. They
re-derive extension sets by full revalidation so the structural shortcut
rules have something definition-shaped to answer to.
"""

from ellentuck.space import Approx, Member, one_extensions, validate_approx


def oracle_extensions(a, X):
    """Every node of X that survives a from-scratch validation when
    appended to a. No admissibility shortcut involved."""
    out = []
    for w in set(X.nodes) - set(a.nodes):
        cand = Approx(a.k, a.nodes + (w,))
        if validate_approx(cand).ok:
            out.append(cand)
    out.sort(key=lambda b: max(b.nodes[-1]))
    return out


def oracle_level(a, X):
    """The definitional level test: the unique l < k such that every
    valid extension's new node has its length-l prefix already in a's
    tree but its length-(l+1) prefix new. Returns the sorted list of
    levels that pass (callers assert it is a singleton)."""
    k = a.k
    exts = oracle_extensions(a, X)
    assert exts, "oracle needs at least one extension to quantify over"
    levels = []
    for l in range(k):
        def proj(j):
            # the induced tree always contains its root, so the empty
            # prefix counts as present even for the empty approximation
            vals = {w[:j] for w in a.nodes}
            if j == 0:
                vals.add(())
            return vals

        lo, hi = proj(l), proj(l + 1)
        if all(b.nodes[-1][:l] in lo and b.nodes[-1][: l + 1] not in hi for b in exts):
            levels.append(l)
    return levels


def random_sub_member(X, length, rng, declared_complete=False, bias=None):
    """A pseudo-random valid sub-member of X with `length` nodes, or
    None when the random walk dead-ends. With bias=m the walk only
    considers the m least extensions per step, which keeps it from
    jumping to the edge of the truncation and starving later steps."""
    a = Approx(X.k)
    for _ in range(length):
        exts = one_extensions(a, X)
        if not exts:
            return None
        a = rng.choice(exts[:bias] if bias else exts)
    return Member(X.k, a.nodes, declared_complete)


def extension_closure_nodes(a, Y):
    """Every node Y can contribute to any chain of extensions of a.
    Each reachable approximation has a unique chain, so plain BFS."""
    used = set()
    frontier = [Approx(a.k, a.nodes)]
    while frontier:
        nxt = []
        for c in frontier:
            for b in one_extensions(c, Y):
                used.add(b.nodes[-1])
                nxt.append(b)
        frontier = nxt
    return used


def sub_approxs_up_to(X, max_len):
    """All valid approximations with nodes from X, up to max_len nodes."""
    frontier = [Approx(X.k)]
    out = list(frontier)
    for _ in range(max_len):
        nxt = []
        for a in frontier:
            nxt.extend(one_extensions(a, X))
        out.extend(nxt)
        frontier = nxt
    return out


def all_sub_members(X, base, length):
    """Exhaustive generator of valid completions of base to the given
    length with nodes from X. Pure definition: every structural choice
    is tried, nothing is pruned. Kept for cross-checking searches on
    tiny truncations only."""
    from ellentuck.space import position_info

    def rec(nodes):
        if len(nodes) == length:
            yield Member(X.k, tuple(nodes))
            return
        l, anchor = position_info(X.k, len(nodes))
        prefix = nodes[anchor][:l] if l else None
        maxi = max((max(w) for w in nodes), default=-1)
        for w in X.nodes:
            if prefix is None:
                if w[0] <= maxi:
                    continue
            elif w[:l] != prefix or w[l] <= maxi:
                continue
            nodes.append(w)
            yield from rec(nodes)
            nodes.pop()

    yield from rec(list(base))
