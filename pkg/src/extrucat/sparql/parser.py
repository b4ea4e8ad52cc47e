"""Recursive-descent parser for the SPARQL subset.

Grammar: ``PREFIX* SELECT (*|?var+) WHERE { (triples|FILTER)* }`` where a
triple's verb is a property path built from IRIs, ``^`` (inverse), ``/``
(sequence) and ``*`` (zero-or-more). The well-known prefixes rdf, rdfs, owl
and xsd are predefined, as on a typical public endpoint, and can be
overridden by PREFIX declarations. Anything outside the subset raises
:class:`UnsupportedFeatureError` naming the keyword.
"""

from __future__ import annotations

import re

from ..rdf.terms import (
    RDF,
    WELL_KNOWN_PREFIXES,
    XSD,
    IRI,
    Literal,
    Term,
)
from .ast import (
    BoolOp,
    Comparison,
    FilterExpr,
    Inverse,
    Not,
    Pred,
    PredVar,
    Query,
    Sequence,
    TriplePattern,
    Var,
    ZeroOrMore,
)

_UNSUPPORTED_KEYWORDS = (
    "OPTIONAL",
    "UNION",
    "MINUS",
    "GRAPH",
    "SERVICE",
    "BIND",
    "VALUES",
    "ORDER",
    "GROUP",
    "HAVING",
    "LIMIT",
    "OFFSET",
    "DISTINCT",
    "REDUCED",
    "CONSTRUCT",
    "ASK",
    "DESCRIBE",
    "EXISTS",
)

_VARNAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PN_PREFIX_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_LOCAL_CHARS = set(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-."
)


class QuerySyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedFeatureError(QuerySyntaxError):
    def __init__(self, keyword: str, line: int, column: int):
        ValueError.__init__(
            self, f"line {line}, column {column}: unsupported SPARQL feature: {keyword}"
        )
        self.keyword = keyword
        self.line = line
        self.column = column


class _Parser:
    def __init__(self, text: str, prefixes: dict[str, str] | None = None):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.prefixes = {**WELL_KNOWN_PREFIXES, **(prefixes or {})}
        self.patterns: list[TriplePattern] = []
        self.filters: list[FilterExpr] = []

    # -- machinery ----------------------------------------------------------

    def _eof(self) -> bool:
        return self.pos >= len(self.text)

    def _peek(self, ahead: int = 0) -> str:
        i = self.pos + ahead
        return self.text[i] if i < len(self.text) else ""

    def _advance(self, n: int = 1) -> str:
        out = self.text[self.pos : self.pos + n]
        for ch in out:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += n
        return out

    def _error(self, message: str):
        raise QuerySyntaxError(message, self.line, self.col)

    def _skip_ws(self):
        while not self._eof():
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while not self._eof() and self._peek() != "\n":
                    self._advance()
            else:
                break

    def _keyword(self, word: str) -> bool:
        """Consume a case-insensitive keyword when present."""
        self._skip_ws()
        end = self.pos + len(word)
        if self.text[self.pos : end].upper() != word.upper():
            return False
        nxt = self.text[end : end + 1]
        if nxt.isalnum() or nxt == "_":
            return False
        self._advance(len(word))
        return True

    def _check_unsupported(self):
        for kw in _UNSUPPORTED_KEYWORDS:
            end = self.pos + len(kw)
            if self.text[self.pos : end].upper() == kw:
                nxt = self.text[end : end + 1]
                if not (nxt.isalnum() or nxt == "_"):
                    raise UnsupportedFeatureError(kw, self.line, self.col)

    def _expect(self, token: str):
        self._skip_ws()
        if self.text.startswith(token, self.pos):
            self._advance(len(token))
        else:
            self._error(f"expected {token!r}")

    # -- toplevel -------------------------------------------------------------

    def parse_query(self) -> Query:
        while True:
            self._skip_ws()
            if self._keyword("PREFIX"):
                self._read_prefix_decl()
            elif self._keyword("BASE"):
                raise UnsupportedFeatureError("BASE", self.line, self.col)
            else:
                break
        self._skip_ws()
        self._check_unsupported()
        if not self._keyword("SELECT"):
            self._error("expected SELECT")
        self._skip_ws()
        self._check_unsupported()
        select_vars: list[str] | None
        if self._peek() == "*":
            self._advance()
            select_vars = None
        else:
            select_vars = []
            while True:
                self._skip_ws()
                if self._peek() != "?":
                    break
                select_vars.append(self._read_var().name)
            if not select_vars:
                self._error("expected '*' or at least one ?variable after SELECT")
        if not self._keyword("WHERE"):
            self._error("expected WHERE")
        self._expect("{")
        self._parse_group_body()
        self._expect("}")
        self._skip_ws()
        if not self._eof():
            self._check_unsupported()
            self._error("trailing content after query")

        query = Query(dict(self.prefixes), select_vars, self.patterns, self.filters)
        if select_vars is not None:
            bound = set(query.pattern_variables())
            for name in select_vars:
                if name not in bound:
                    self._error(f"selected variable ?{name} does not appear in any pattern")
        return query

    def parse_fragment(self):
        """Group content alone (triples and FILTERs), for template injection."""
        self._parse_group_body()
        self._skip_ws()
        if not self._eof():
            self._check_unsupported()
            self._error("trailing content in pattern fragment")
        return self.patterns, self.filters

    def _read_prefix_decl(self):
        self._skip_ws()
        m = _PN_PREFIX_RE.match(self.text, self.pos)
        prefix = ""
        if m and self._peek(m.end() - self.pos) == ":":
            prefix = m.group(0)
            self._advance(len(prefix))
        if self._peek() != ":":
            self._error("expected ':' in PREFIX declaration")
        self._advance()
        self._skip_ws()
        if self._peek() != "<":
            self._error("expected IRI in PREFIX declaration")
        self.prefixes[prefix] = self._read_iriref().value

    # -- group content -----------------------------------------------------------

    def _parse_group_body(self):
        while True:
            self._skip_ws()
            if self._eof() or self._peek() == "}":
                return
            self._check_unsupported()
            if self._peek() == "{":
                raise UnsupportedFeatureError(
                    "UNION / nested group pattern", self.line, self.col
                )
            if self._keyword("FILTER"):
                self._expect("(")
                self.filters.append(self._parse_or_expr())
                self._expect(")")
                self._skip_ws()
                if self._peek() == ".":
                    self._advance()
                continue
            self._parse_triples_block()

    def _parse_triples_block(self):
        subject = self._parse_term(allow_literal=False)
        while True:
            self._skip_ws()
            path = self._parse_path()
            while True:
                obj = self._parse_term(allow_literal=True)
                self.patterns.append(TriplePattern(subject, path, obj))
                self._skip_ws()
                if self._peek() == ",":
                    self._advance()
                    continue
                break
            self._skip_ws()
            if self._peek() == ";":
                self._advance()
                self._skip_ws()
                if self._peek() in ".}" or self._eof():
                    break
                continue
            break
        self._skip_ws()
        if self._peek() == ".":
            self._advance()

    # -- paths ----------------------------------------------------------------

    def _parse_path(self):
        self._skip_ws()
        if self._peek() == "?":
            # Variable predicates stand alone; SPARQL forbids them in paths.
            return PredVar(self._read_var())
        if self._keyword("a"):
            left = Pred(RDF.type)
        else:
            left = self._parse_path_elt_or_inverse()
        while True:
            self._skip_ws()
            if self._peek() == "/":
                self._advance()
                right = self._parse_path_elt_or_inverse()
                left = Sequence(left, right)
            else:
                return left

    def _parse_path_elt_or_inverse(self):
        self._skip_ws()
        if self._peek() == "^":
            self._advance()
            return Inverse(self._parse_path_elt())
        return self._parse_path_elt()

    def _parse_path_elt(self):
        self._skip_ws()
        if self._peek() == "(":
            self._advance()
            inner = self._parse_path()
            self._expect(")")
            path = inner
        else:
            term = self._parse_iri()
            path = Pred(term)
        if self._peek() == "*":
            self._advance()
            return ZeroOrMore(path)
        if self._peek() in "+?":
            mod = self._peek()
            raise UnsupportedFeatureError(f"path modifier '{mod}'", self.line, self.col)
        return path

    # -- terms ------------------------------------------------------------------

    def _read_var(self) -> Var:
        if self._peek() != "?":
            self._error("expected variable")
        self._advance()
        m = _VARNAME_RE.match(self.text, self.pos)
        if not m:
            self._error("invalid variable name")
        name = m.group(0)
        self._advance(len(name))
        return Var(name)

    def _parse_term(self, allow_literal: bool):
        self._skip_ws()
        ch = self._peek()
        if ch == "?":
            return self._read_var()
        if ch == "[":
            raise UnsupportedFeatureError("blank node pattern", self.line, self.col)
        if ch == "_":
            raise UnsupportedFeatureError("blank node pattern", self.line, self.col)
        if ch in "\"'":
            if not allow_literal:
                self._error("literal not allowed in subject position")
            return self._parse_string_literal()
        if ch.isdigit() or (ch in "+-." and (self._peek(1).isdigit() or self._peek(1) == ".")):
            if not allow_literal:
                self._error("literal not allowed in subject position")
            return self._parse_number()
        if self._keyword("true"):
            return Literal("true", XSD.boolean.value)
        if self._keyword("false"):
            return Literal("false", XSD.boolean.value)
        return self._parse_iri()

    def _parse_iri(self) -> IRI:
        self._skip_ws()
        if self._peek() == "<":
            return self._read_iriref()
        return self._read_prefixed_name()

    def _read_iriref(self) -> IRI:
        self._expect("<")
        start_line, start_col = self.line, self.col
        out = []
        while True:
            if self._eof():
                raise QuerySyntaxError("unterminated IRI", start_line, start_col)
            ch = self._advance()
            if ch == ">":
                break
            if ch in " \t\n\r\"{}|^`":
                raise QuerySyntaxError(f"invalid IRI character {ch!r}", self.line, self.col)
            out.append(ch)
        return IRI("".join(out))

    def _read_prefixed_name(self) -> IRI:
        start_line, start_col = self.line, self.col
        m = _PN_PREFIX_RE.match(self.text, self.pos)
        prefix = ""
        if m:
            candidate = m.group(0)
            if self._peek(len(candidate)) == ":":
                prefix = candidate
                self._advance(len(candidate))
        if self._peek() != ":":
            self._error("expected an IRI, prefixed name or variable")
        self._advance()
        start = self.pos
        while not self._eof() and self._peek() in _LOCAL_CHARS:
            if self._peek() == "." and self._peek(1) not in _LOCAL_CHARS:
                break
            self._advance()
        local = self.text[start : self.pos]
        if prefix not in self.prefixes:
            raise QuerySyntaxError(f"unknown prefix {prefix + ':'!r}", start_line, start_col)
        return IRI(self.prefixes[prefix] + local)

    def _parse_string_literal(self) -> Literal:
        quote = self._advance()
        start_line, start_col = self.line, self.col
        out = []
        while True:
            if self._eof():
                raise QuerySyntaxError("unterminated string", start_line, start_col)
            ch = self._advance()
            if ch == quote:
                break
            if ch == "\\":
                esc = self._advance()
                mapping = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "'": "'", "\\": "\\"}
                if esc not in mapping:
                    raise QuerySyntaxError(f"invalid escape \\{esc}", self.line, self.col)
                out.append(mapping[esc])
                continue
            out.append(ch)
        lexical = "".join(out)
        if self.text.startswith("^^", self.pos):
            self._advance(2)
            dt = self._parse_iri()
            return Literal(lexical, dt.value)
        if self._peek() == "@":
            self._advance()
            m = re.match(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*", self.text[self.pos :])
            if not m:
                self._error("expected language tag")
            tag = m.group(0)
            self._advance(len(tag))
            return Literal(lexical, RDF.langString.value, tag)
        return Literal(lexical)

    def _parse_number(self) -> Literal:
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            self._error("malformed number")
        lex = m.group(0)
        if lex.endswith(".") and "e" not in lex.lower():
            lex = lex[:-1]
        self._advance(len(lex))
        if "e" in lex.lower():
            return Literal(lex, XSD.double.value)
        if "." in lex:
            return Literal(lex, XSD.decimal.value)
        return Literal(lex, XSD.integer.value)

    # -- filter expressions --------------------------------------------------------

    def _parse_or_expr(self) -> FilterExpr:
        left = self._parse_and_expr()
        while True:
            self._skip_ws()
            if self.text.startswith("||", self.pos):
                self._advance(2)
                left = BoolOp("or", left, self._parse_and_expr())
            else:
                return left

    def _parse_and_expr(self) -> FilterExpr:
        left = self._parse_unary_expr()
        while True:
            self._skip_ws()
            if self.text.startswith("&&", self.pos):
                self._advance(2)
                left = BoolOp("and", left, self._parse_unary_expr())
            else:
                return left

    def _parse_unary_expr(self) -> FilterExpr:
        self._skip_ws()
        if self._peek() == "!" and self._peek(1) != "=":
            self._advance()
            return Not(self._parse_unary_expr())
        if self._peek() == "(":
            self._advance()
            inner = self._parse_or_expr()
            self._expect(")")
            return inner
        return self._parse_comparison()

    def _parse_comparison(self) -> Comparison:
        left = self._parse_operand()
        self._skip_ws()
        for op in ("<=", ">=", "!=", "=", "<", ">"):
            if self.text.startswith(op, self.pos):
                self._advance(len(op))
                right = self._parse_operand()
                return Comparison(op, left, right)
        self._error("expected comparison operator")

    def _parse_operand(self):
        self._skip_ws()
        ch = self._peek()
        if ch == "?":
            return self._read_var()
        if ch in "\"'":
            return self._parse_string_literal()
        if ch.isdigit() or (ch in "+-." and (self._peek(1).isdigit() or self._peek(1) == ".")):
            return self._parse_number()
        if self._keyword("true"):
            return Literal("true", XSD.boolean.value)
        if self._keyword("false"):
            return Literal("false", XSD.boolean.value)
        return self._parse_iri()


def parse_query(text: str) -> Query:
    return _Parser(text).parse_query()


def parse_group_fragment(
    text: str, prefixes: dict[str, str] | None = None
) -> tuple[list[TriplePattern], list[FilterExpr]]:
    """Parse WHERE-group content (patterns and FILTERs) standing alone."""
    return _Parser(text, prefixes=prefixes).parse_fragment()
