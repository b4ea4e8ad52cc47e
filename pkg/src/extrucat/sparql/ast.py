"""AST for the supported SPARQL subset: SELECT over a basic graph pattern
with property paths (iri, ^, /, *) and FILTER expressions."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Union

from ..rdf.terms import IRI, Term


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __repr__(self) -> str:
        return f"?{self.name}"


# -- property paths ---------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Pred:
    iri: IRI


@dataclass(frozen=True, slots=True)
class PredVar:
    """A plain variable in predicate position; not composable with path operators."""

    var: Var


@dataclass(frozen=True, slots=True)
class Inverse:
    path: "Path"


@dataclass(frozen=True, slots=True)
class Sequence:
    left: "Path"
    right: "Path"


@dataclass(frozen=True, slots=True)
class ZeroOrMore:
    path: "Path"


Path = Union[Pred, PredVar, Inverse, Sequence, ZeroOrMore]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    subject: Term | Var
    path: Path
    object: Term | Var

    def variables(self) -> list[Var]:
        out = []
        if isinstance(self.subject, Var):
            out.append(self.subject)
        if isinstance(self.path, PredVar):
            out.append(self.path.var)
        if isinstance(self.object, Var):
            out.append(self.object)
        return out


# -- filter expressions ------------------------------------------------------

Operand = Union[Var, Term]


@dataclass(frozen=True, slots=True)
class Comparison:
    op: str  # one of = != < <= > >=
    left: Operand
    right: Operand


@dataclass(frozen=True, slots=True)
class BoolOp:
    op: str  # "and" | "or"
    left: "FilterExpr"
    right: "FilterExpr"


@dataclass(frozen=True, slots=True)
class Not:
    expr: "FilterExpr"


FilterExpr = Union[Comparison, BoolOp, Not]


# -- query and results --------------------------------------------------------


@dataclass
class Query:
    prefixes: dict[str, str]
    select_vars: list[str] | None  # None means SELECT *
    patterns: list[TriplePattern]
    filters: list[FilterExpr] = field(default_factory=list)

    def pattern_variables(self) -> list[str]:
        seen: list[str] = []
        for p in self.patterns:
            for v in p.variables():
                if v.name not in seen:
                    seen.append(v.name)
        return seen

    def projection(self) -> list[str]:
        return self.select_vars if self.select_vars is not None else self.pattern_variables()

    def constants(self) -> set[Term]:
        out: set[Term] = set()
        for p in self.patterns:
            if not isinstance(p.subject, Var):
                out.add(p.subject)
            if not isinstance(p.object, Var):
                out.add(p.object)
        return out


Row = dict[str, Term]


@dataclass
class Solution:
    variables: list[str]
    rows: list[Row]

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def as_multiset(self) -> Counter:
        return Counter(frozenset(row.items()) for row in self.rows)

    def same_rows(self, other: "Solution") -> bool:
        return self.as_multiset() == other.as_multiset()
