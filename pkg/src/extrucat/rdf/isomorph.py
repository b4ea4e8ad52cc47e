"""Graph isomorphism up to blank-node renaming, for small graphs.

Ground triples must match exactly; blank-containing triples are matched by
searching for a blank-node bijection, with candidate pruning by a structural
signature. Intended for round-trip checks, not large graphs.
"""

from __future__ import annotations

from typing import Iterable

from .terms import BlankNode, Triple


def _split(triples: Iterable[Triple]):
    ground, blankish = set(), []
    for t in triples:
        if isinstance(t.subject, BlankNode) or isinstance(t.object, BlankNode):
            blankish.append(t)
        else:
            ground.add(t)
    return ground, blankish


def _signature(node: BlankNode, triples: list[Triple]) -> tuple:
    out, inc = [], []
    for t in triples:
        if t.subject == node:
            obj = "_" if isinstance(t.object, BlankNode) else t.object
            out.append((t.predicate, obj))
        if t.object == node:
            subj = "_" if isinstance(t.subject, BlankNode) else t.subject
            inc.append((t.predicate, subj))
    return (tuple(sorted(out, key=repr)), tuple(sorted(inc, key=repr)))


def isomorphic(a: Iterable[Triple], b: Iterable[Triple]) -> bool:
    ground_a, blank_a = _split(a)
    ground_b, blank_b = _split(b)
    if ground_a != ground_b or len(blank_a) != len(blank_b):
        return False

    nodes_a = sorted(
        {n for t in blank_a for n in (t.subject, t.object) if isinstance(n, BlankNode)},
        key=lambda n: n.id,
    )
    nodes_b = {
        n for t in blank_b for n in (t.subject, t.object) if isinstance(n, BlankNode)
    }
    if len(nodes_a) != len(nodes_b):
        return False

    sig_a = {n: _signature(n, blank_a) for n in nodes_a}
    sig_b: dict[tuple, list[BlankNode]] = {}
    for n in nodes_b:
        sig_b.setdefault(_signature(n, blank_b), []).append(n)

    target = set(blank_b)

    def rename(t: Triple, mapping: dict[BlankNode, BlankNode]) -> Triple:
        s = mapping.get(t.subject, t.subject) if isinstance(t.subject, BlankNode) else t.subject
        o = mapping.get(t.object, t.object) if isinstance(t.object, BlankNode) else t.object
        return Triple(s, t.predicate, o)

    def assign(idx: int, mapping: dict[BlankNode, BlankNode], used: set[BlankNode]) -> bool:
        if idx == len(nodes_a):
            return {rename(t, mapping) for t in blank_a} == target
        node = nodes_a[idx]
        for candidate in sig_b.get(sig_a[node], []):
            if candidate in used:
                continue
            mapping[node] = candidate
            used.add(candidate)
            if assign(idx + 1, mapping, used):
                return True
            del mapping[node]
            used.discard(candidate)
        return False

    return assign(0, {}, set())
