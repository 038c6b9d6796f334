"""Partition calculus on finite truncations.

All searches in this module run over sub-members of a fixed truncated
member X, so every result is a statement about the finite data actually
supplied.  Searches are complete depth-first enumerations in the
well-order (least fresh node first) with a budget on visited states;
when the budget runs out the outcome is an Exhausted value rather than
a wrong answer.  Budgets default to ELLENTUCK_BUDGET from the
environment, or 10**6 states.
"""

import itertools
import os
from dataclasses import dataclass

from .errors import (
    AmbiguousAtScale,
    DisagreeWitness,
    Exhausted,
    NotCanonicalAtScale,
)
from .space import (
    Approx,
    Member,
    admits,
    depth_of,
    one_extensions,
    position_info,
    r_approx,
    validate_approx,
)
from .wellorder import classify_n, domain_at, seq_str

DEFAULT_BUDGET = 10 ** 6


class Budget:
    """Counter of visited search states shared across one operation."""

    def __init__(self, limit=None):
        if limit is None:
            limit = int(os.environ.get("ELLENTUCK_BUDGET", DEFAULT_BUDGET))
        if limit <= 0:
            raise ValueError("budget limit must be positive")
        self.limit = limit
        self.used = 0

    def spend(self):
        """Consume one state; False once the limit has been passed."""
        self.used += 1
        return self.used <= self.limit


class _Blown(Exception):
    """Internal signal that the search budget ran out."""


class Coloring:
    """Finite map from approximations to integer colors.

    The table is extensional: only approximations listed in it have a
    color, and looking up anything else is an error.  This keeps every
    homogeneity claim checkable by enumeration.
    """

    def __init__(self, table):
        self._table = {}
        for a, c in dict(table).items():
            if not isinstance(a, Approx):
                raise TypeError("coloring keys must be approximations")
            self._table[a] = int(c)

    @classmethod
    def from_function(cls, fn, domain):
        return cls({a: fn(a) for a in domain})

    def of(self, a):
        try:
            return self._table[a]
        except KeyError:
            raise ValueError(
                "coloring is not defined on %s" % (tuple(a.nodes),)
            ) from None

    def items(self):
        return self._table.items()

    def __len__(self):
        return len(self._table)


class Relation:
    """Equivalence relation on a finite set of approximations.

    Stored as a class id per approximation, so `related` is a lookup
    and the relation is an equivalence by construction.
    """

    def __init__(self, class_of):
        self._class_of = dict(class_of)

    @classmethod
    def from_classes(cls, classes):
        class_of = {}
        for i, group in enumerate(classes):
            for a in group:
                if a in class_of and class_of[a] != i:
                    raise ValueError("classes are not disjoint")
                class_of[a] = i
        return cls(class_of)

    @classmethod
    def from_key_function(cls, keyfn, domain):
        """Group the domain by a key; equal keys mean related."""
        ids = {}
        class_of = {}
        for a in domain:
            key = keyfn(a)
            class_of[a] = ids.setdefault(key, len(ids))
        return cls(class_of)

    @classmethod
    def from_function(cls, fn, domain):
        """Group by a boolean predicate assumed to be an equivalence."""
        reps = []
        class_of = {}
        for a in domain:
            for i, rep in enumerate(reps):
                if fn(a, rep):
                    class_of[a] = i
                    break
            else:
                class_of[a] = len(reps)
                reps.append(a)
        return cls(class_of)

    def related(self, a, b):
        return self.class_id(a) == self.class_id(b)

    def class_id(self, a):
        try:
            return self._class_of[a]
        except KeyError:
            raise ValueError(
                "relation is not defined on %s" % (tuple(a.nodes),)
            ) from None

    def domain(self):
        return tuple(self._class_of)

    def classes(self):
        groups = {}
        for a, i in self._class_of.items():
            groups.setdefault(i, []).append(a)
        return [tuple(g) for _, g in sorted(groups.items())]

    def __len__(self):
        return len(self._class_of)


@dataclass(frozen=True)
class CanonicalRelation:
    """Agreement up to a fixed projection level: E_level on new nodes."""

    level: int

    def relates(self, w1, w2):
        return tuple(w1)[: self.level] == tuple(w2)[: self.level]


@dataclass(frozen=True)
class RelationCanonization:
    """Outcome of canonizing a relation on length-n approximations.

    `vector` is the least projection vector that fits on some witness
    sub-member, `member` that witness, and `fits` the full list of
    (vector, member) pairs found, one per admissible vector that fit.
    Unpacks as (vector, member).
    """

    vector: tuple
    member: Member
    fits: tuple

    def __iter__(self):
        yield self.vector
        yield self.member


@dataclass(frozen=True)
class CoverReport:
    """Whether a family met every restriction chain of a member."""

    ok: bool
    counterexample: "Approx | None" = None

    def __bool__(self):
        return self.ok


def _search_member(k, base, supply, target_len, budget, flt):
    """First valid completion of base to target_len nodes, depth first.

    Candidates are drawn from supply in order (callers pass nodes
    sorted ascending by maximum, so the least fresh node is tried
    first).  flt.try_push(nodes, w) may veto a placement; when it
    returns True it has recorded state and flt.pop() undoes it on
    backtrack.  flt.accept(nodes) gates completed members.  Returns
    the node tuple, or None when the space is exhausted.  Raises
    _Blown when the budget runs out.
    """
    nodes = list(base)
    maxis = [max((max(w) for w in nodes), default=-1)]

    def descend():
        if len(nodes) == target_len:
            return flt.accept(nodes)
        l, anchor = position_info(k, len(nodes))
        prefix = nodes[anchor][:l] if l else None
        maxi = maxis[-1]
        for w in supply:
            if prefix is None:
                if w[0] <= maxi:
                    continue
            elif w[:l] != prefix or w[l] <= maxi:
                continue
            if not budget.spend():
                raise _Blown()
            if not flt.try_push(nodes, w):
                continue
            nodes.append(w)
            maxis.append(max(maxi, max(w)))
            if descend():
                return True
            maxis.pop()
            nodes.pop()
            flt.pop()
        return False

    if descend():
        return tuple(nodes)
    return None


class _NoFilter:
    def try_push(self, nodes, w):
        return True

    def pop(self):
        pass

    def accept(self, nodes):
        return True


class _MonochromeFilter:
    """Keep every one-step extension of `a` inside one color class."""

    def __init__(self, a, coloring, color):
        self.a = a
        self.coloring = coloring
        self.color = color
        self.hits = []

    def try_push(self, nodes, w):
        if admits(self.a, w):
            b = Approx(self.a.k, self.a.nodes + (w,))
            if self.coloring.of(b) != self.color:
                return False
            self.hits.append(True)
        else:
            self.hits.append(False)
        return True

    def pop(self):
        self.hits.pop()

    def accept(self, nodes):
        return any(self.hits)


def pigeonhole(a, X, coloring, target_len, budget=None):
    """Monochromatic sub-member for a coloring of one-step extensions.

    Searches for Y with r_d(Y) = r_d(X) (d the depth of a in X) and
    target_len nodes such that every one-step extension of a inside Y
    gets the same color.  Returns (Y, color), trying colors in
    ascending order, or Exhausted.  The homogeneity certificate is
    re-checked by enumeration before returning.
    """
    a = _checked_approx(a, X.k)
    d = depth_of(X, a)
    if d == float("inf"):
        raise ValueError("the approximation does not sit inside the member")
    if target_len < d:
        raise ValueError("target length is below the depth of the approximation")
    budget = budget or Budget()
    base = X.nodes[:d]
    colors = sorted({coloring.of(b) for b in one_extensions(a, X)})
    if not colors:
        got = _search_member(X.k, base, X.nodes, target_len, budget, _NoFilter())
        if got is None:
            return Exhausted("supply", "no completion from the depth prefix")
        return Member(X.k, got), None
    blown = False
    for color in colors:
        flt = _MonochromeFilter(a, coloring, color)
        try:
            got = _search_member(X.k, base, X.nodes, target_len, budget, flt)
        except _Blown:
            blown = True
            break
        if got is not None:
            Y = Member(X.k, got)
            seen = {coloring.of(b) for b in one_extensions(a, Y)}
            if seen != {color}:
                raise AssertionError("homogeneity certificate failed")
            return Y, color
    if blown:
        return Exhausted("budget", "state budget ran out at %d" % budget.used)
    return Exhausted("supply", "no color admits a homogeneous sub-member")


class _LevelFitFilter:
    """Colors of extensions of s must match projection-level agreement.

    Color agreement coinciding with agreement of the level-j prefix is
    the same as the map color <-> prefix being a bijection on the
    extensions seen so far, which is an O(1) check per node.
    """

    def __init__(self, s, coloring, level, floor_pairs):
        self.s = s
        self.coloring = coloring
        self.level = level
        self.floor_pairs = floor_pairs
        self.quals = []
        self.proj_color = {}
        self.color_proj = {}
        self.trail = []

    def try_push(self, nodes, w):
        if not admits(self.s, w):
            self.trail.append(None)
            return True
        c = self.coloring.of(Approx(self.s.k, self.s.nodes + (w,)))
        p = w[: self.level]
        if p in self.proj_color:
            if self.proj_color[p] != c:
                return False
            self.trail.append((w, None))
        elif c in self.color_proj:
            return False
        else:
            self.proj_color[p] = c
            self.color_proj[c] = p
            self.trail.append((w, (p, c)))
        self.quals.append((w, c))
        return True

    def pop(self):
        mark = self.trail.pop()
        if mark is None:
            return
        self.quals.pop()
        if mark[1] is not None:
            p, c = mark[1]
            del self.proj_color[p]
            del self.color_proj[c]

    def accept(self, nodes):
        # Demand witnesses separating every adjacent pair of candidate
        # levels, so no other level can fit the same data.
        for c1, c2 in self.floor_pairs:
            if not any(
                u[:c1] == v[:c1] and u[:c2] != v[:c2]
                for i, (u, _) in enumerate(self.quals)
                for (v, _) in self.quals[:i]
            ):
                return False
        return True


def canonize_one_extensions(s, X, coloring, target_len, budget=None):
    """Canonical form of a coloring of one-step extensions of s.

    Finds a sub-member Y (sharing the depth prefix of s in X) on which
    color agreement between extensions of s coincides with agreement
    up to a single projection level.  The only possible levels are 0
    and l+1..k where l is the branching level at step |s|.  Returns
    (Y, CanonicalRelation) when exactly one level fits, an
    AmbiguousAtScale when several levels fit their own witnesses, or
    Exhausted.
    """
    s = _checked_approx(s, X.k)
    d = depth_of(X, s)
    if d == float("inf"):
        raise ValueError("the approximation does not sit inside the member")
    if target_len < d:
        raise ValueError("target length is below the depth of the approximation")
    budget = budget or Budget()
    for b in one_extensions(s, X):
        coloring.of(b)
    l = classify_n(X.k, len(s.nodes))
    candidates = [0] + list(range(l + 1, X.k + 1))
    floor_pairs = list(zip(candidates, candidates[1:]))
    base = X.nodes[:d]
    fits = []
    blown = False
    for level in candidates:
        flt = _LevelFitFilter(s, coloring, level, floor_pairs)
        try:
            got = _search_member(X.k, base, X.nodes, target_len, budget, flt)
        except _Blown:
            blown = True
            break
        if got is not None:
            fits.append((level, Member(X.k, got)))
    if len(fits) == 1:
        level, Y = fits[0]
        return Y, CanonicalRelation(level)
    if len(fits) > 1:
        return AmbiguousAtScale(candidates=tuple(level for level, _ in fits))
    if blown:
        return Exhausted("budget", "state budget ran out at %d" % budget.used)
    return Exhausted("supply", "no projection level fits a sub-member")


def admissible_vectors(k, n):
    """Projection vectors a canonical relation on n-approximations may use.

    Coordinate i is either 0 (project away) or a level strictly above
    the branching level of step i, in particular never a level that
    would cut a node below where its chain already forks.  Vectors
    with a redundant coordinate are dropped: when positions i < j
    share a domain prefix of length at least l_i and l_j >= l_i, the
    node at j determines the level-l_i projection at i in every valid
    approximation, so the same relation is already induced with l_i
    set to 0.  Without this normalization distinct vectors would
    induce literally equal relations and no round trip could tell
    them apart.
    """
    choices = []
    for i in range(n):
        choices.append([0] + list(range(classify_n(k, i) + 1, k + 1)))
    domains = [domain_at(i, k) for i in range(n)]
    shared = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = 0
            while c < k and domains[i][c] == domains[j][c]:
                c += 1
            shared[i, j] = c

    def redundant(v):
        for i in range(n):
            if v[i] == 0:
                continue
            for j in range(i + 1, n):
                if v[j] >= v[i] and shared[i, j] >= v[i]:
                    return True
        return False

    return [
        tuple(v) for v in itertools.product(*choices) if not redundant(tuple(v))
    ]


def _approxs_of_length(k, pool, n):
    """All valid n-approximations with nodes drawn from pool."""
    pool = sorted(set(pool), key=lambda w: (max(w), w))
    out = []
    cur = []

    def rec():
        if len(cur) == n:
            out.append(Approx(k, tuple(cur)))
            return
        l, anchor = position_info(k, len(cur))
        prefix = cur[anchor][:l] if l else None
        maxi = max((max(w) for w in cur), default=-1)
        for w in pool:
            if prefix is None:
                if w[0] <= maxi:
                    continue
            elif w[:l] != prefix or w[l] <= maxi:
                continue
            cur.append(w)
            rec()
            cur.pop()

    rec()
    return out


class _VectorFitFilter:
    """Relation must equal projection-key agreement on n-approximations.

    As in _LevelFitFilter, the fit condition is the map from projection
    keys to relation classes being a bijection on the approximations
    formed so far; both directions are kept as dicts.
    """

    def __init__(self, relation, vector, k, n):
        self.relation = relation
        self.vector = vector
        self.k = k
        self.n = n
        self.key_class = {}
        self.class_key = {}
        self.trail = []

    def _key(self, b):
        return tuple(b.nodes[i][: self.vector[i]] for i in range(self.n))

    def _fresh(self, nodes, w):
        if self.n == 1:
            return [Approx(self.k, (w,))]
        if self.n == 2:
            l1, _ = position_info(self.k, 1)
            head = w[:l1]
            return [
                Approx(self.k, (u, w))
                for u in nodes
                if u[:l1] == head and w[l1] > u[-1]
            ]
        out = []
        for c in _approxs_of_length(self.k, nodes, self.n - 1):
            if admits(c, w):
                out.append(Approx(self.k, c.nodes + (w,)))
        return out

    def try_push(self, nodes, w):
        inserted = []
        for b in self._fresh(nodes, w):
            kb = self._key(b)
            cb = self.relation.class_id(b)
            if kb in self.key_class:
                if self.key_class[kb] != cb:
                    break
            elif cb in self.class_key:
                break
            else:
                self.key_class[kb] = cb
                self.class_key[cb] = kb
                inserted.append((kb, cb))
        else:
            self.trail.append(inserted)
            return True
        for kb, cb in inserted:
            del self.key_class[kb]
            del self.class_key[cb]
        return False

    def pop(self):
        for kb, cb in self.trail.pop():
            del self.key_class[kb]
            del self.class_key[cb]

    def accept(self, nodes):
        return True


def canonize_relation(relation, k, n, X, target_len, budget=None):
    """Canonical projection vector for a relation on n-approximations.

    Tries every admissible vector in ascending lexicographic order,
    searching for a sub-member of X of target_len nodes on which the
    relation coincides with agreement of coordinatewise projections.
    Returns a RelationCanonization carrying the least fitting vector,
    its witness, and all fits; NotCanonicalAtScale when the search
    space was exhausted with no fit; Exhausted when the budget ran out
    first.
    """
    if X.k != k:
        raise ValueError("member dimension does not match k")
    if n < 1:
        raise ValueError("approximation length must be at least 1")
    if target_len < n:
        raise ValueError("target length cannot be below the approximation length")
    budget = budget or Budget()
    fits = []
    blown = False
    for vector in admissible_vectors(k, n):
        flt = _VectorFitFilter(relation, vector, k, n)
        try:
            got = _search_member(k, (), X.nodes, target_len, budget, flt)
        except _Blown:
            blown = True
            break
        if got is not None:
            fits.append((vector, Member(k, got)))
    if fits:
        vector, member = fits[0]
        return RelationCanonization(vector, member, tuple(fits))
    if blown:
        return Exhausted("budget", "state budget ran out at %d" % budget.used)
    return NotCanonicalAtScale(vectors_checked=len(admissible_vectors(k, n)))


def nash_williams_check(family):
    """True when no member of the family properly end-extends another."""
    approxs = list(dict.fromkeys(family))
    for a in approxs:
        _require_valid(a)
    for a, b in itertools.permutations(approxs, 2):
        if len(a.nodes) < len(b.nodes) and b.nodes[: len(a.nodes)] == a.nodes:
            return False
    return True


def front_cover_check(family, X):
    """Check that every restriction chain of X meets the family.

    The family must pass nash_williams_check.  Walks the tree of
    approximations below X depth first; a chain is closed off as soon
    as it hits the family, and a maximal chain that never does is
    returned as the counterexample.
    """
    approxs = list(dict.fromkeys(family))
    for a in approxs:
        if a.k != X.k:
            raise ValueError("family and member dimensions differ")
    if not nash_williams_check(approxs):
        raise ValueError("family fails the no-end-extension check")
    hits = set(approxs)

    def walk(cur):
        if cur in hits:
            return None
        exts = one_extensions(cur, X)
        if not exts:
            return cur
        for nxt in exts:
            bad = walk(nxt)
            if bad is not None:
                return bad
        return None

    bad = walk(Approx(X.k))
    if bad is None:
        return CoverReport(True)
    return CoverReport(False, counterexample=bad)


def proj_image(a, vector):
    """Set image of an approximation under coordinatewise projection."""
    if len(vector) != len(a.nodes):
        raise ValueError("vector length does not match the approximation")
    out = set()
    for w, l in zip(a.nodes, vector):
        if not 0 <= l <= a.k:
            raise ValueError("projection level %r out of range" % (l,))
        out.add(w[:l])
    return frozenset(out)


class InnerMap:
    """Projection vector assigned to each approximation of a family."""

    def __init__(self, vectors):
        self._vectors = {}
        for a, v in dict(vectors).items():
            if not isinstance(a, Approx):
                raise TypeError("inner map keys must be approximations")
            self._vectors[a] = tuple(int(c) for c in v)

    @classmethod
    def uniform(cls, vector, family):
        return cls({a: tuple(vector) for a in family})

    def vector_for(self, a):
        try:
            return self._vectors[a]
        except KeyError:
            raise ValueError(
                "inner map is not defined on %s" % (tuple(a.nodes),)
            ) from None

    def image(self, a):
        return proj_image(a, self.vector_for(a))

    def domain(self):
        return tuple(self._vectors)


def inner_check(phi, family):
    """True when phi assigns every family member a well-formed vector."""
    for a in family:
        try:
            v = phi.vector_for(a)
        except ValueError:
            return False
        if len(v) != len(a.nodes):
            return False
        if any(not 0 <= c <= a.k for c in v):
            return False
    return True


def irreducible_check(phi, family):
    """Inner and no image is a strict partial stage of another image.

    For approximations a, b in the family, if the image of a equals
    the partial image of b built from its first n nodes, the full
    images must already agree; otherwise phi could be reduced on b.
    """
    approxs = list(dict.fromkeys(family))
    if not inner_check(phi, approxs):
        return False
    images = {a: phi.image(a) for a in approxs}
    for a in approxs:
        for b in approxs:
            vb = phi.vector_for(b)
            full = images[b]
            for n in range(len(b.nodes) + 1):
                partial = frozenset(
                    b.nodes[i][: vb[i]] for i in range(n)
                )
                if images[a] == partial and images[a] != full:
                    return False
    return True


class _AgreementFilter:
    """Images under two inner maps must agree on family members inside."""

    def __init__(self, phi1, phi2, family):
        self.phi1 = phi1
        self.phi2 = phi2
        self.family = family
        self.hits = []

    def try_push(self, nodes, w):
        have = set(nodes)
        have.add(w)
        count = 0
        for a in self.family:
            if w in a.nodes and set(a.nodes) <= have:
                if self.phi1.image(a) != self.phi2.image(a):
                    return False
                count += 1
        self.hits.append(count)
        return True

    def pop(self):
        self.hits.pop()

    def accept(self, nodes):
        return sum(self.hits) > 0


def irreducible_agreement(phi1, phi2, relation, family, X, target_len=8, budget=None):
    """Two canonizing inner maps agree pointwise on some sub-member.

    First checks that each map canonizes the relation on the family
    restricted to X (relation holds exactly when images agree); a
    failing pair is returned as a DisagreeWitness.  Then searches for
    a sub-member A of X such that phi1 and phi2 give the same image to
    every family member inside A, with at least one such member.
    """
    approxs = [a for a in dict.fromkeys(family) if set(a.nodes) <= set(X.nodes)]
    for a in approxs:
        if a.k != X.k:
            raise ValueError("family and member dimensions differ")
    for phi, tag in ((phi1, "first"), (phi2, "second")):
        images = {a: phi.image(a) for a in approxs}
        for a, b in itertools.combinations(approxs, 2):
            if relation.related(a, b) != (images[a] == images[b]):
                return DisagreeWitness(
                    a=a,
                    b=b,
                    detail="the %s map does not canonize the relation on %s, %s"
                    % (tag, _approx_str(a), _approx_str(b)),
                )
    budget = budget or Budget()
    flt = _AgreementFilter(phi1, phi2, approxs)
    try:
        got = _search_member(X.k, (), X.nodes, target_len, budget, flt)
    except _Blown:
        return Exhausted("budget", "state budget ran out at %d" % budget.used)
    if got is None:
        return Exhausted("supply", "no sub-member carries an agreeing family member")
    return Member(X.k, got), True


def _approx_str(a):
    return "[" + ",".join(seq_str(w) for w in a.nodes) + "]"


def _require_valid(a, what="approximation"):
    report = validate_approx(a)
    if not report.ok:
        raise ValueError(f"{what} does not validate: {report.message}")


def _checked_approx(a, k):
    if a.k != k:
        raise ValueError("approximation dimension does not match the member")
    _require_valid(a)
    return a
