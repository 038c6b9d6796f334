"""File formats for the command line: canonical JSON and DOT trees.

Serialization is canonical throughout (sorted keys, no whitespace), so
the same value always produces the same bytes and golden-file diffs
stay quiet. Approximations serialize as {"k": ..., "nodes": [[...]]},
colorings as {"colors": {key: int}} and relations as a domain list
plus classes of indices, where a key is the canonical JSON string of
the approximation it names.
"""

import json
import re
from functools import cmp_to_key

from .ramsey import Coloring, InnerMap, Relation
from .space import Approx, Member
from .wellorder import cmp_prec, domain_at


def canonical_json(value) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"))


# ---------------------------------------------------------------- approx


def approx_to_obj(a) -> dict:
    obj = {"k": a.k, "nodes": [list(w) for w in a.nodes]}
    if isinstance(a, Member) and a.declared_complete:
        obj["complete"] = True
    return obj


def approx_key(a) -> str:
    """Canonical JSON of the approximation, used as a mapping key."""
    return canonical_json({"k": a.k, "nodes": [list(w) for w in a.nodes]})


def approx_from_obj(obj, member=False):
    if not isinstance(obj, dict):
        raise ValueError("expected an object with 'k' and 'nodes' fields")
    unknown = set(obj) - {"k", "nodes", "complete"}
    if unknown:
        raise ValueError("unknown fields: %s" % ", ".join(sorted(unknown)))
    for field in ("k", "nodes"):
        if field not in obj:
            raise ValueError("missing field %r" % field)
    nodes = obj["nodes"]
    if not isinstance(nodes, list) or not all(
        isinstance(w, list) and all(isinstance(v, int) for v in w)
        for w in nodes
    ):
        raise ValueError("'nodes' must be a list of integer lists")
    complete = obj.get("complete", False)
    if not isinstance(complete, bool):
        raise ValueError("'complete' must be a boolean")
    if member or complete:
        return Member(obj["k"], tuple(map(tuple, nodes)), declared_complete=complete)
    return Approx(obj["k"], tuple(map(tuple, nodes)))


def dump_approx(a) -> str:
    return canonical_json(approx_to_obj(a))


def load_approx(text, member=False):
    return approx_from_obj(json.loads(text), member=member)


def _sort_key(a):
    return (a.k, len(a.nodes), a.nodes)


# -------------------------------------------------------------- coloring


def dump_coloring(coloring) -> str:
    colors = {approx_key(a): c for a, c in coloring.items()}
    return canonical_json({"colors": colors})


def load_coloring(text) -> Coloring:
    obj = json.loads(text)
    if not isinstance(obj, dict) or set(obj) != {"colors"}:
        raise ValueError("expected an object with a single 'colors' field")
    colors = obj["colors"]
    if not isinstance(colors, dict):
        raise ValueError("'colors' must map approximation keys to integers")
    table = {}
    for key, c in colors.items():
        if not isinstance(c, int) or isinstance(c, bool):
            raise ValueError("color for %s is not an integer" % key)
        table[approx_from_obj(json.loads(key))] = c
    return Coloring(table)


# -------------------------------------------------------------- relation


def dump_relation(relation) -> str:
    domain = sorted(relation.domain(), key=_sort_key)
    index = {a: i for i, a in enumerate(domain)}
    classes = sorted(sorted(index[a] for a in group) for group in relation.classes())
    return canonical_json(
        {"domain": [approx_to_obj(a) for a in domain], "classes": classes}
    )


def load_relation(text) -> Relation:
    obj = json.loads(text)
    if not isinstance(obj, dict) or set(obj) != {"domain", "classes"}:
        raise ValueError("expected an object with 'domain' and 'classes'")
    domain = [approx_from_obj(o) for o in obj["domain"]]
    classes = obj["classes"]
    if not isinstance(classes, list) or not all(
        isinstance(group, list) and all(isinstance(i, int) for i in group)
        for group in classes
    ):
        raise ValueError("'classes' must be a list of index lists")
    used = sorted(i for group in classes for i in group)
    if used != list(range(len(domain))):
        raise ValueError("classes must partition the domain indices exactly")
    return Relation.from_classes([[domain[i] for i in group] for group in classes])


# ---------------------------------------------------------------- family


def dump_family(family) -> str:
    return canonical_json([approx_to_obj(a) for a in family])


def load_family(text) -> list:
    obj = json.loads(text)
    if not isinstance(obj, list):
        raise ValueError("expected a list of approximations")
    return [approx_from_obj(o) for o in obj]


# ------------------------------------------------------------- inner map


def dump_inner_map(phi) -> str:
    vectors = {approx_key(a): list(phi.vector_for(a)) for a in phi.domain()}
    return canonical_json({"vectors": vectors})


def load_inner_map(text) -> InnerMap:
    obj = json.loads(text)
    if not isinstance(obj, dict) or set(obj) != {"vectors"}:
        raise ValueError("expected an object with a single 'vectors' field")
    vectors = obj["vectors"]
    if not isinstance(vectors, dict):
        raise ValueError("'vectors' must map approximation keys to level lists")
    table = {}
    for key, v in vectors.items():
        if not isinstance(v, list) or not all(
            isinstance(l, int) and not isinstance(l, bool) for l in v
        ):
            raise ValueError("vector for %s is not a list of integers" % key)
        table[approx_from_obj(json.loads(key))] = tuple(v)
    return InnerMap(table)


# ------------------------------------------------------------------- dot


def _ident(values) -> str:
    return ",".join(str(v) for v in values)


def _label(values) -> str:
    if not values:
        return "∅"
    return "{" + ",".join(str(v) for v in values) + "}"


def to_dot(a) -> str:
    """Directed tree of the approximation's chain prefixes.

    Node declarations and edges both follow the well-order of the
    prefixes' index sequences, so rendered children appear in the same
    left-to-right order as the listings.
    """
    tree = {(): ()}
    for p, node in enumerate(a.nodes):
        dom = domain_at(p, a.k)
        for level in range(1, a.k + 1):
            tree[dom[:level]] = node[:level]
    order = sorted(tree, key=cmp_to_key(cmp_prec))
    lines = ["digraph ellentuck {", "  // k=%d" % a.k, "  ordering=out;"]
    for dkey in order:
        lines.append('  "%s" [label="%s"];' % (_ident(tree[dkey]), _label(tree[dkey])))
    for dkey in order:
        if dkey:
            lines.append(
                '  "%s" -> "%s";' % (_ident(tree[dkey[:-1]]), _ident(tree[dkey]))
            )
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE = re.compile(r'^\s*"([0-9,]*)"\s*\[label="[^"]*"\]\s*;\s*$')
_DOT_EDGE = re.compile(r'^\s*"([0-9,]*)"\s*->\s*"([0-9,]*)"\s*;\s*$')
_DOT_K = re.compile(r"^\s*//\s*k=(\d+)\s*$")


def from_dot(text, member=False):
    """Rebuild an approximation from its DOT tree.

    The leaves, in declaration order, are the approximation's nodes;
    declaration order is trusted, not re-sorted, so an invalid file
    stays invalid for the validator to report.
    """
    k = None
    seen = []
    sources = set()

    def note(ident):
        if ident not in seen:
            seen.append(ident)

    for line in text.splitlines():
        m = _DOT_K.match(line)
        if m:
            k = int(m.group(1))
            continue
        m = _DOT_NODE.match(line)
        if m:
            note(m.group(1))
            continue
        m = _DOT_EDGE.match(line)
        if m:
            note(m.group(1))
            note(m.group(2))
            sources.add(m.group(1))
    if k is None:
        raise ValueError("missing '// k=N' comment")
    nodes = tuple(
        tuple(int(v) for v in ident.split(","))
        for ident in seen
        if ident and ident not in sources
    )
    if member:
        return Member(k, nodes)
    return Approx(k, nodes)
