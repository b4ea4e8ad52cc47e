"""Brute-force reference evaluator for cross-checking the engine.

No indexes and no join planning: each pattern's relation is materialized by
scanning every triple, star paths are closed by iterated relational
composition to a fixpoint, and patterns are joined in written order by
nested loops. Refuses stores above a size bound so it stays obviously
tractable. Kept deliberately separate from the engine, including its own
filter arithmetic.
"""

from __future__ import annotations

from decimal import Decimal, InvalidOperation

from ..rdf.store import Snapshot
from ..rdf.terms import NUMERIC_DATATYPES, Literal, Term, Triple, XSD
from .ast import (
    BoolOp,
    Comparison,
    Inverse,
    Not,
    Path,
    Pred,
    PredVar,
    Query,
    Row,
    Sequence,
    Solution,
    TriplePattern,
    Var,
    ZeroOrMore,
)

MAX_ORACLE_TRIPLES = 300


class OracleSizeError(ValueError):
    pass


def evaluate_oracle(snapshot: Snapshot, query: Query) -> Solution:
    if len(snapshot) > MAX_ORACLE_TRIPLES:
        raise OracleSizeError(
            f"oracle refuses stores above {MAX_ORACLE_TRIPLES} triples ({len(snapshot)} given)"
        )
    triples = list(snapshot)
    nodes = {t.subject for t in triples} | {t.object for t in triples}
    universe = nodes | query.constants()

    rows: list[Row] = [{}]
    for pattern in query.patterns:
        if isinstance(pattern.path, PredVar):
            rows = _join_with_predicate(rows, pattern, triples)
        else:
            relation = _pattern_relation(triples, universe, pattern.path)
            rows = _join(rows, pattern, relation)
        if not rows:
            break
    if query.filters:
        rows = [r for r in rows if all(_filter_holds(f, r) for f in query.filters)]
    variables = query.projection()
    projected = [{v: r[v] for v in variables if v in r} for r in rows]
    return Solution(variables, projected)


# -- relations ---------------------------------------------------------------


def _pattern_relation(triples: list[Triple], universe: set[Term], path: Path):
    """Multiset of (subject, object) pairs satisfying the path."""
    if isinstance(path, Pred):
        return [(t.subject, t.object) for t in triples if t.predicate == path.iri]
    if isinstance(path, Inverse):
        return [(b, a) for a, b in _pattern_relation(triples, universe, path.path)]
    if isinstance(path, Sequence):
        left = _pattern_relation(triples, universe, path.left)
        right = _pattern_relation(triples, universe, path.right)
        return [(a, d) for a, b in left for c, d in right if b == c]
    if isinstance(path, ZeroOrMore):
        base = set(_pattern_relation(triples, universe, path.path))
        closure = set(base)
        while True:
            extra = {(a, d) for a, b in closure for c, d in base if b == c} - closure
            if not extra:
                break
            closure |= extra
        return [(n, n) for n in universe] + sorted(
            closure - {(n, n) for n in universe}, key=repr
        )
    raise TypeError(f"unknown path node {path!r}")  # pragma: no cover


def _join(rows: list[Row], pattern: TriplePattern, relation) -> list[Row]:
    out: list[Row] = []
    for row in rows:
        for s, o in relation:
            candidate = dict(row)
            if not _bind(candidate, pattern.subject, s):
                continue
            if not _bind(candidate, pattern.object, o):
                continue
            out.append(candidate)
    return out


def _join_with_predicate(
    rows: list[Row], pattern: TriplePattern, triples: list[Triple]
) -> list[Row]:
    out: list[Row] = []
    for row in rows:
        for t in triples:
            candidate = dict(row)
            if not _bind(candidate, pattern.subject, t.subject):
                continue
            if not _bind(candidate, pattern.path.var, t.predicate):
                continue
            if not _bind(candidate, pattern.object, t.object):
                continue
            out.append(candidate)
    return out


def _bind(row: Row, endpoint, value: Term) -> bool:
    if isinstance(endpoint, Var):
        if endpoint.name in row:
            return row[endpoint.name] == value
        row[endpoint.name] = value
        return True
    return endpoint == value


# -- filters -------------------------------------------------------------------


def _filter_holds(expr, row: Row) -> bool:
    value = _truth(expr, row)
    return value is True


def _truth(expr, row: Row):
    """Three-valued evaluation: True, False or None for error."""
    if isinstance(expr, Not):
        inner = _truth(expr.expr, row)
        return None if inner is None else (not inner)
    if isinstance(expr, BoolOp):
        left = _truth(expr.left, row)
        right = _truth(expr.right, row)
        if expr.op == "and":
            if left is False or right is False:
                return False
            if left is None or right is None:
                return None
            return True
        if left is True or right is True:
            return True
        if left is None or right is None:
            return None
        return False
    if isinstance(expr, Comparison):
        left = row.get(expr.left.name) if isinstance(expr.left, Var) else expr.left
        right = row.get(expr.right.name) if isinstance(expr.right, Var) else expr.right
        if left is None or right is None:
            return None
        return _cmp(expr.op, left, right)
    raise TypeError(f"unknown filter node {expr!r}")  # pragma: no cover


def _is_numeric_typed(term: Term) -> bool:
    return isinstance(term, Literal) and term.datatype in NUMERIC_DATATYPES


def _num(term: Term):
    try:
        return Decimal(term.lexical)
    except InvalidOperation:
        return None


def _cmp(op: str, left: Term, right: Term):
    l_numeric = _is_numeric_typed(left)
    r_numeric = _is_numeric_typed(right)
    if op in ("=", "!="):
        if l_numeric and r_numeric:
            ln, rn = _num(left), _num(right)
            if ln is None or rn is None:
                return None  # malformed numeric lexical form
            result = ln == rn
        elif l_numeric or r_numeric:
            return None  # number against non-number is an error
        elif isinstance(left, Literal) != isinstance(right, Literal):
            return None
        else:
            result = left == right
        return result if op == "=" else not result
    if l_numeric and r_numeric:
        lv, rv = _num(left), _num(right)
        if lv is None or rv is None:
            return None
    elif (
        isinstance(left, Literal)
        and isinstance(right, Literal)
        and left.datatype == XSD.string.value
        and right.datatype == XSD.string.value
    ):
        lv, rv = left.lexical, right.lexical
    else:
        return None
    if op == "<":
        return lv < rv
    if op == "<=":
        return lv <= rv
    if op == ">":
        return lv > rv
    if op == ">=":
        return lv >= rv
    return None
