"""Competency-question suite.

A ``.cq`` file bundles the natural-language question (front matter), the
query text and the expected rows:

    ---
    id: 1a
    question: How many models of extruders does the company offer?
    ---
    PREFIX ext: <...>
    SELECT ?e WHERE { ?e a ext:Extruder }
    --- expected ---
    [{"e": "http://...#E01"}, ...]

Expected rows list a subset of the query's variables; values are compared
against a canonical string form (IRI value, literal lexical form, ``_:id``
for blank nodes) and ``"*"`` matches anything. The result must contain
exactly as many rows as expected, each expected row matching a distinct
result row.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

from .rdf.store import Snapshot
from .rdf.terms import BlankNode, IRI, Literal, Term
from .sparql.engine import evaluate
from .sparql.parser import parse_query

EXPECTED_MARKER = "--- expected ---"


class CqFileError(ValueError):
    pass


@dataclass
class CqCase:
    id: str
    question: str
    query_text: str
    expected: list[dict[str, str]]
    path: Path | None = None


@dataclass
class CqResult:
    case: CqCase
    passed: bool
    actual_rows: list[dict[str, str]]
    elapsed_s: float
    detail: str = ""


@dataclass
class CqReport:
    results: list[CqResult] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1


def parse_cq_file(path: Path | str) -> CqCase:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or lines[0].strip() != "---":
        raise CqFileError(f"{path}: expected front matter starting with ---")
    try:
        end = next(i for i in range(1, len(lines)) if lines[i].strip() == "---")
    except StopIteration:
        raise CqFileError(f"{path}: unterminated front matter")
    meta: dict[str, str] = {}
    for raw in lines[1:end]:
        if not raw.strip():
            continue
        key, sep, value = raw.partition(":")
        if not sep:
            raise CqFileError(f"{path}: bad front matter line {raw!r}")
        meta[key.strip()] = value.strip()
    rest = "\n".join(lines[end + 1 :])
    if EXPECTED_MARKER not in rest:
        raise CqFileError(f"{path}: missing {EXPECTED_MARKER!r} section")
    query_text, _, expected_text = rest.partition(EXPECTED_MARKER)
    try:
        expected = json.loads(expected_text)
    except json.JSONDecodeError as exc:
        raise CqFileError(f"{path}: expected rows are not valid JSON: {exc}")
    if not isinstance(expected, list) or not all(isinstance(r, dict) for r in expected):
        raise CqFileError(f"{path}: expected rows must be a JSON array of objects")
    return CqCase(
        id=meta.get("id", path.stem),
        question=meta.get("question", ""),
        query_text=query_text.strip(),
        expected=expected,
        path=path,
    )


def canonical(term: Term) -> str:
    if isinstance(term, IRI):
        return term.value
    if isinstance(term, BlankNode):
        return f"_:{term.id}"
    if isinstance(term, Literal):
        return term.lexical
    return repr(term)


def _row_matches(expected: dict[str, str], actual: dict[str, str]) -> bool:
    for var, want in expected.items():
        got = actual.get(var)
        if got is None:
            return False
        if want != "*" and got != want:
            return False
    return True


def _match_rows(expected: list[dict], actual: list[dict]) -> tuple[bool, str]:
    if len(expected) != len(actual):
        return False, f"expected {len(expected)} rows, got {len(actual)}"

    # Backtracking bipartite match; suites are small.
    used: set[int] = set()

    def assign(i: int) -> bool:
        if i == len(expected):
            return True
        for j, row in enumerate(actual):
            if j in used:
                continue
            if _row_matches(expected[i], row):
                used.add(j)
                if assign(i + 1):
                    return True
                used.discard(j)
        return False

    if assign(0):
        return True, ""
    unmatched = [e for e in expected if not any(_row_matches(e, a) for a in actual)]
    return False, f"unmatched expected rows: {json.dumps(unmatched[:3])}"


def run_case(snapshot: Snapshot, case: CqCase) -> CqResult:
    started = time.perf_counter()
    query = parse_query(case.query_text)
    solution = evaluate(snapshot, query)
    elapsed = time.perf_counter() - started
    actual = [{k: canonical(v) for k, v in row.items()} for row in solution.rows]
    ok, detail = _match_rows(case.expected, actual)
    return CqResult(case, ok, actual, elapsed, detail)


def run_suite(snapshot: Snapshot, cq_dir: Path | str) -> CqReport:
    report = CqReport()
    paths = sorted(Path(cq_dir).glob("*.cq"))
    if not paths:
        report.warnings.append(f"no .cq files under {cq_dir}; trivially passing")
        return report
    for path in paths:
        case = parse_cq_file(path)
        report.results.append(run_case(snapshot, case))
    return report
