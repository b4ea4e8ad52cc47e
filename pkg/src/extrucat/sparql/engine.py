"""Query evaluation over a store snapshot.

Semantics notes:

* Basic graph patterns join on shared variables; projection may duplicate
  rows (bag semantics, no implicit DISTINCT).
* ``p*`` includes the zero-step case. The zero-length universe is the set of
  graph nodes (subjects and objects) plus any constant terms written in the
  query, which keeps evaluation independent of join order.
* Sequence paths keep multiplicity (one row per intermediate node), matching
  the translation to a fresh-variable triple pattern; star paths yield each
  reachable pair once.
* A filter that errors (unbound variable, cross-type comparison) drops the
  row rather than raising.
"""

from __future__ import annotations

from decimal import Decimal
from typing import Iterator

from ..rdf.store import Snapshot
from ..rdf.terms import Literal, Term, XSD
from .ast import (
    BoolOp,
    Comparison,
    FilterExpr,
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


class FilterEvalError(Exception):
    """Raised inside filter evaluation; callers turn it into a dropped row."""


def evaluate(snapshot: Snapshot, query: Query) -> Solution:
    universe = frozenset(snapshot.nodes() | query.constants())
    bindings: list[Row] = [{}]
    for pattern in _greedy_order(query.patterns):
        next_bindings: list[Row] = []
        for row in bindings:
            s = _resolve(pattern.subject, row)
            o = _resolve(pattern.object, row)
            if isinstance(pattern.path, PredVar):
                pname = pattern.path.var.name
                p = row.get(pname)
                for t in snapshot.match(s, p, o):
                    extended = _extend(row, pattern, t.subject, t.object)
                    if extended is None:
                        continue
                    bound = extended.get(pname)
                    if bound is not None and bound != t.predicate:
                        continue
                    extended[pname] = t.predicate
                    next_bindings.append(extended)
            else:
                for sv, ov in _eval_path(snapshot, pattern.path, s, o, universe):
                    extended = _extend(row, pattern, sv, ov)
                    if extended is not None:
                        next_bindings.append(extended)
        bindings = next_bindings
        if not bindings:
            break
    if query.filters:
        bindings = [
            row
            for row in bindings
            if all(_filter_passes(f, row) for f in query.filters)
        ]
    variables = query.projection()
    rows = [{v: row[v] for v in variables if v in row} for row in bindings]
    return Solution(variables, rows)


def _greedy_order(patterns: list[TriplePattern]) -> list[TriplePattern]:
    """Most-bound-first: correctness is order independent, speed is not."""
    remaining = list(enumerate(patterns))
    bound: set[str] = set()
    ordered: list[TriplePattern] = []
    while remaining:
        def score(item):
            idx, p = item
            positions = 0
            for endpoint in (p.subject, p.object):
                if not isinstance(endpoint, Var) or endpoint.name in bound:
                    positions += 1
            return (-positions, len(p.variables()), idx)

        remaining.sort(key=score)
        idx, best = remaining.pop(0)
        ordered.append(best)
        bound.update(v.name for v in best.variables())
    return ordered


def _resolve(endpoint, row: Row) -> Term | None:
    if isinstance(endpoint, Var):
        return row.get(endpoint.name)
    return endpoint


def _extend(row: Row, pattern: TriplePattern, sv: Term, ov: Term) -> Row | None:
    out = row
    for endpoint, value in ((pattern.subject, sv), (pattern.object, ov)):
        if isinstance(endpoint, Var):
            existing = out.get(endpoint.name)
            if existing is None:
                if out is row:
                    out = dict(row)
                out[endpoint.name] = value
            elif existing != value:
                return None
    return out if out is not row else dict(row)


# -- property paths -----------------------------------------------------------


def _eval_path(
    snapshot: Snapshot, path: Path, s: Term | None, o: Term | None, universe
) -> Iterator[tuple[Term, Term]]:
    if isinstance(path, Pred):
        for t in snapshot.match(s, path.iri, o):
            yield t.subject, t.object
    elif isinstance(path, Inverse):
        for a, b in _eval_path(snapshot, path.path, o, s, universe):
            yield b, a
    elif isinstance(path, Sequence):
        if s is not None or o is None:
            for ls, mid in _eval_path(snapshot, path.left, s, None, universe):
                for _, ro in _eval_path(snapshot, path.right, mid, o, universe):
                    yield ls, ro
        else:
            for mid, ro in _eval_path(snapshot, path.right, None, o, universe):
                for ls, _ in _eval_path(snapshot, path.left, s, mid, universe):
                    yield ls, ro
    elif isinstance(path, ZeroOrMore):
        yield from _eval_star(snapshot, path.path, s, o, universe)
    else:  # pragma: no cover
        raise TypeError(f"unknown path node {path!r}")


def _step(snapshot: Snapshot, path: Path, node: Term, universe) -> set[Term]:
    return {o for _, o in _eval_path(snapshot, path, node, None, universe)}


def _reachable(snapshot: Snapshot, path: Path, start: Term, universe) -> set[Term]:
    """BFS closure including the zero-step start; safe on cyclic graphs."""
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            for target in _step(snapshot, path, node, universe):
                if target not in seen:
                    seen.add(target)
                    nxt.append(target)
        frontier = nxt
    return seen


def _eval_star(
    snapshot: Snapshot, sub: Path, s: Term | None, o: Term | None, universe
) -> Iterator[tuple[Term, Term]]:
    if s is not None:
        reach = _reachable(snapshot, sub, s, universe)
        if o is not None:
            if o in reach:
                yield s, o
        else:
            for node in reach:
                yield s, node
    elif o is not None:
        reach = _reachable(snapshot, Inverse(sub), o, universe)
        for node in reach:
            yield node, o
    else:
        for start in universe:
            for node in _reachable(snapshot, sub, start, universe):
                yield start, node


# -- filters --------------------------------------------------------------------


def _filter_passes(expr: FilterExpr, row: Row) -> bool:
    try:
        return _eval_filter(expr, row)
    except FilterEvalError:
        return False


def _eval_filter(expr: FilterExpr, row: Row) -> bool:
    if isinstance(expr, Comparison):
        return _compare(expr.op, _operand_value(expr.left, row), _operand_value(expr.right, row))
    if isinstance(expr, Not):
        return not _eval_filter(expr.expr, row)
    if isinstance(expr, BoolOp):
        # SPARQL three-valued logic: one decided side can absorb an error.
        left_err = right_err = None
        left = right = None
        try:
            left = _eval_filter(expr.left, row)
        except FilterEvalError as exc:
            left_err = exc
        try:
            right = _eval_filter(expr.right, row)
        except FilterEvalError as exc:
            right_err = exc
        if expr.op == "and":
            if left is False or right is False:
                return False
            if left_err or right_err:
                raise left_err or right_err
            return True
        if left is True or right is True:
            return True
        if left_err or right_err:
            raise left_err or right_err
        return False
    raise TypeError(f"unknown filter node {expr!r}")  # pragma: no cover


def _operand_value(operand, row: Row) -> Term:
    if isinstance(operand, Var):
        value = row.get(operand.name)
        if value is None:
            raise FilterEvalError(f"unbound variable ?{operand.name}")
        return value
    return operand


def _compare(op: str, left: Term, right: Term) -> bool:
    if op in ("=", "!="):
        equal = _terms_equal(left, right)
        return equal if op == "=" else not equal
    lv = _orderable_value(left)
    rv = _orderable_value(right)
    if isinstance(lv, Decimal) != isinstance(rv, Decimal):
        raise FilterEvalError("cross-type comparison")
    if op == "<":
        return lv < rv
    if op == "<=":
        return lv <= rv
    if op == ">":
        return lv > rv
    if op == ">=":
        return lv >= rv
    raise FilterEvalError(f"unknown operator {op}")


def _terms_equal(left: Term, right: Term) -> bool:
    if isinstance(left, Literal) and isinstance(right, Literal):
        if left.is_numeric and right.is_numeric:
            try:
                return left.numeric_value() == right.numeric_value()
            except ValueError as exc:
                raise FilterEvalError(str(exc))
        if left.is_numeric != right.is_numeric:
            raise FilterEvalError("cross-type equality")
        return left == right
    if isinstance(left, Literal) != isinstance(right, Literal):
        raise FilterEvalError("term/literal equality")
    return left == right


def _orderable_value(term: Term):
    if not isinstance(term, Literal):
        raise FilterEvalError("ordering requires literals")
    if term.is_numeric:
        try:
            return term.numeric_value()
        except ValueError as exc:
            raise FilterEvalError(str(exc))
    if term.datatype == XSD.string.value:
        return term.lexical
    raise FilterEvalError(f"unorderable datatype {term.datatype}")
