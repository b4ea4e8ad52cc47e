"""Named query templates stored as .rq files with {{PLACEHOLDER}} slots.

Two substitution kinds exist: RDF terms (rendered with full escaping into
any slot) and pattern fragments, which are only accepted for the designated
``{{FILTERS}}`` slot and must parse as group content on their own before
being spliced. The bound query is re-parsed as a final guard, so a fragment
can never smuggle structure past the grammar.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from ..rdf.terms import IRI, BlankNode, Literal, Term
from .ast import Query
from .parser import QuerySyntaxError, parse_group_fragment, parse_query

_PLACEHOLDER_RE = re.compile(r"\{\{([A-Z_]+)\}\}")
_PREFIX_LINE_RE = re.compile(r"^\s*PREFIX\s+([A-Za-z_][\w.\-]*)?:\s*<([^>]*)>", re.I | re.M)

FILTER_SLOT = "FILTERS"


class TemplateError(ValueError):
    pass


class UnknownTemplateError(TemplateError):
    pass


class PlaceholderError(TemplateError):
    pass


class FragmentSyntaxError(TemplateError):
    pass


@dataclass(frozen=True)
class Fragment:
    """Group-pattern text destined for the {{FILTERS}} slot."""

    text: str


def render_term(term: Term) -> str:
    if isinstance(term, (IRI, Literal)):
        return term.n3()
    if isinstance(term, BlankNode):
        raise PlaceholderError("blank nodes cannot be substituted into a query")
    raise PlaceholderError(f"not a term: {term!r}")


class TemplateRegistry:
    def __init__(self, directory: Path | str):
        self.directory = Path(directory)
        self._cache: dict[str, str] = {}

    def names(self) -> list[str]:
        return sorted(p.stem for p in self.directory.glob("*.rq"))

    def template_text(self, name: str) -> str:
        if name not in self._cache:
            path = self.directory / f"{name}.rq"
            if not path.exists():
                raise UnknownTemplateError(f"unknown template {name!r}")
            self._cache[name] = path.read_text(encoding="utf-8")
        return self._cache[name]

    def bind(self, name: str, substitutions: dict[str, Term | Fragment | str] | None = None) -> Query:
        text = self.template_text(name)
        substitutions = dict(substitutions or {})
        slots = set(_PLACEHOLDER_RE.findall(text))
        unknown = set(substitutions) - slots
        if unknown:
            raise PlaceholderError(
                f"template {name!r} has no placeholder(s) {sorted(unknown)}"
            )
        missing = slots - set(substitutions)
        if missing:
            raise PlaceholderError(
                f"template {name!r} missing substitution(s) {sorted(missing)}"
            )
        prefixes = {m.group(1) or "": m.group(2) for m in _PREFIX_LINE_RE.finditer(text)}

        def replace(match: re.Match) -> str:
            slot = match.group(1)
            value = substitutions[slot]
            if isinstance(value, Fragment) or (isinstance(value, str) and slot == FILTER_SLOT):
                if slot != FILTER_SLOT:
                    raise PlaceholderError(
                        f"pattern fragments are only allowed in the {FILTER_SLOT} slot"
                    )
                fragment_text = value.text if isinstance(value, Fragment) else value
                try:
                    parse_group_fragment(fragment_text, prefixes=prefixes)
                except QuerySyntaxError as exc:
                    raise FragmentSyntaxError(f"fragment rejected: {exc}") from exc
                return fragment_text
            return render_term(value)

        bound = _PLACEHOLDER_RE.sub(replace, text)
        try:
            return parse_query(bound)
        except QuerySyntaxError as exc:
            raise FragmentSyntaxError(f"bound template does not parse: {exc}") from exc


def bind_template(
    registry: TemplateRegistry, name: str, substitutions=None
) -> Query:
    return registry.bind(name, substitutions)
