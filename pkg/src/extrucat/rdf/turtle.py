"""Turtle reader and writer.

Supported surface: @prefix/@base (and SPARQL-style PREFIX/BASE), the `a`
keyword, predicate-object and object lists, collections `( ... )`, anonymous
blank nodes `[ ... ]`, labelled blank nodes, typed and language-tagged
literals, and the integer/decimal/double/boolean shorthands. Named graphs and
the quad syntaxes are not part of this subset.
"""

from __future__ import annotations

import re
from urllib.parse import urljoin

from .terms import RDF, XSD, BlankNode, IRI, Literal, Term, Triple, escape_literal

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")
_PN_PREFIX_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_.\-]*")
_LANG_RE = re.compile(r"[a-zA-Z]+(?:-[a-zA-Z0-9]+)*")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?")
_LOCAL_CHARS = set(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_-."
)

_STRING_ESCAPES = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


class TurtleSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class TurtleParser:
    """Single-pass recursive-descent parser over a character buffer."""

    def __init__(self, text: str, base: str | None = None):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._blank_seq = 0

    # -- entry point ---------------------------------------------------

    def parse(self) -> list[Triple]:
        while True:
            self._skip_ws()
            if self._eof():
                break
            if not self._parse_directive():
                self._parse_triples_block()
        return self.triples

    # -- character machinery -------------------------------------------

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
        raise TurtleSyntaxError(message, self.line, self.col)

    def _skip_ws(self):
        while not self._eof():
            ch = self._peek()
            if ch in " \t\r\n":
                self._advance()
            elif ch == "#":
                while not self._eof() and self._peek() != "\n":
                    self._advance()
            else:
                return

    def _expect(self, token: str):
        self._skip_ws()
        if self.text.startswith(token, self.pos):
            self._advance(len(token))
        else:
            self._error(f"expected {token!r}")

    def _starts_keyword(self, word: str) -> bool:
        # Case-insensitive keyword not glued to a name character.
        if not self.text[self.pos : self.pos + len(word)].lower() == word.lower():
            return False
        nxt = self._peek(len(word))
        return not (nxt.isalnum() or nxt == "_")

    # -- directives -----------------------------------------------------

    def _parse_directive(self) -> bool:
        if self._peek() == "@":
            if self.text.startswith("@prefix", self.pos):
                self._advance(len("@prefix"))
                self._read_prefix_decl()
                self._expect(".")
                return True
            if self.text.startswith("@base", self.pos):
                self._advance(len("@base"))
                self._read_base_decl()
                self._expect(".")
                return True
            self._error("unknown directive")
        if self._starts_keyword("prefix"):
            self._advance(len("prefix"))
            self._read_prefix_decl()
            return True
        if self._starts_keyword("base"):
            self._advance(len("base"))
            self._read_base_decl()
            return True
        return False

    def _read_prefix_decl(self):
        self._skip_ws()
        m = _PN_PREFIX_RE.match(self.text, self.pos)
        prefix = ""
        if m and self._peek(m.end() - self.pos) == ":":
            prefix = m.group(0)
            self._advance(len(prefix))
        if self._peek() != ":":
            self._error("expected ':' in prefix declaration")
        self._advance()
        self._skip_ws()
        iri = self._read_iriref()
        self.prefixes[prefix] = iri.value

    def _read_base_decl(self):
        self._skip_ws()
        self.base = self._read_iriref().value

    # -- triples ----------------------------------------------------------

    def _parse_triples_block(self):
        subject = self._parse_subject()
        self._skip_ws()
        # `[ ... ] .` with no following predicates is legal.
        if self._peek() == "." and isinstance(subject, BlankNode):
            self._advance()
            return
        self._parse_predicate_object_list(subject)
        self._expect(".")

    def _parse_predicate_object_list(self, subject: Term):
        while True:
            self._skip_ws()
            predicate = self._parse_verb()
            while True:
                obj = self._parse_object()
                self._emit(subject, predicate, obj)
                self._skip_ws()
                if self._peek() == ",":
                    self._advance()
                    continue
                break
            self._skip_ws()
            if self._peek() == ";":
                self._advance()
                self._skip_ws()
                # Dangling ';' before '.' or ']' is permitted.
                if self._peek() in ".]" or self._eof():
                    return
                continue
            return

    def _parse_verb(self) -> IRI:
        self._skip_ws()
        if self._starts_keyword("a"):
            self._advance()
            return RDF.type
        term = self._parse_iri_like()
        if not isinstance(term, IRI):
            self._error("predicate must be an IRI")
        return term

    def _parse_subject(self) -> Term:
        self._skip_ws()
        ch = self._peek()
        if ch == "(":
            return self._parse_collection()
        if ch == "[":
            return self._parse_anon_blank()
        if ch == "_":
            return self._parse_blank_label()
        term = self._parse_iri_like()
        return term

    def _parse_object(self) -> Term:
        self._skip_ws()
        ch = self._peek()
        if ch == "(":
            return self._parse_collection()
        if ch == "[":
            return self._parse_anon_blank()
        if ch == "_":
            return self._parse_blank_label()
        if ch in "\"'":
            return self._parse_string_literal()
        if ch.isdigit() or (ch in "+-." and (self._peek(1).isdigit() or self._peek(1) == ".")):
            return self._parse_number()
        if self._starts_keyword("true"):
            self._advance(4)
            return Literal("true", XSD.boolean.value)
        if self._starts_keyword("false"):
            self._advance(5)
            return Literal("false", XSD.boolean.value)
        return self._parse_iri_like()

    # -- node forms -------------------------------------------------------

    def _new_blank(self) -> BlankNode:
        self._blank_seq += 1
        return BlankNode(f"gen{self._blank_seq}")

    def _parse_blank_label(self) -> BlankNode:
        if not self.text.startswith("_:", self.pos):
            self._error("expected blank node label")
        self._advance(2)
        start = self.pos
        while not self._eof() and (self._peek().isalnum() or self._peek() in "_-."):
            self._advance()
        label = self.text[start : self.pos]
        while label.endswith("."):
            label = label[:-1]
            self.pos -= 1
            self.col -= 1
        if not label:
            self._error("empty blank node label")
        return BlankNode(label)

    def _parse_anon_blank(self) -> BlankNode:
        self._expect("[")
        node = self._new_blank()
        self._skip_ws()
        if self._peek() == "]":
            self._advance()
            return node
        self._parse_predicate_object_list(node)
        self._expect("]")
        return node

    def _parse_collection(self) -> Term:
        self._expect("(")
        items: list[Term] = []
        while True:
            self._skip_ws()
            if self._peek() == ")":
                self._advance()
                break
            if self._eof():
                self._error("unterminated collection")
            items.append(self._parse_object())
        if not items:
            return RDF.nil
        head = self._new_blank()
        node = head
        for i, item in enumerate(items):
            self._emit(node, RDF.first, item)
            if i + 1 < len(items):
                nxt = self._new_blank()
                self._emit(node, RDF.rest, nxt)
                node = nxt
            else:
                self._emit(node, RDF.rest, RDF.nil)
        return head

    def _parse_iri_like(self) -> Term:
        self._skip_ws()
        if self._peek() == "<":
            return self._read_iriref()
        return self._read_prefixed_name()

    def _read_iriref(self) -> IRI:
        if self._peek() != "<":
            self._error("expected IRI")
        self._advance()
        start_line, start_col = self.line, self.col
        out = []
        while True:
            if self._eof():
                raise TurtleSyntaxError("unterminated IRI", start_line, start_col)
            ch = self._advance()
            if ch == ">":
                break
            if ch in " \t\n\r\"{}|^`":
                raise TurtleSyntaxError(f"invalid IRI character {ch!r}", self.line, self.col)
            if ch == "\\":
                esc = self._advance()
                if esc == "u":
                    out.append(chr(int(self._advance(4), 16)))
                elif esc == "U":
                    out.append(chr(int(self._advance(8), 16)))
                else:
                    raise TurtleSyntaxError("invalid IRI escape", self.line, self.col)
                continue
            out.append(ch)
        value = "".join(out)
        if not _SCHEME_RE.match(value):
            if self.base is None:
                raise TurtleSyntaxError(
                    f"relative IRI {value!r} without a base", start_line, start_col
                )
            value = urljoin(self.base, value)
        return IRI(value)

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
            self._error("expected an IRI, prefixed name or blank node")
        self._advance()
        start = self.pos
        while not self._eof() and self._peek() in _LOCAL_CHARS:
            # A '.' only stays in the local name when a name character follows.
            if self._peek() == "." and self._peek(1) not in _LOCAL_CHARS:
                break
            self._advance()
        local = self.text[start : self.pos]
        if prefix not in self.prefixes:
            raise TurtleSyntaxError(
                f"undefined prefix {prefix + ':'!r}", start_line, start_col
            )
        return IRI(self.prefixes[prefix] + local)

    # -- literals ---------------------------------------------------------

    def _parse_string_literal(self) -> Literal:
        quote = self._peek()
        long_form = self.text.startswith(quote * 3, self.pos)
        delim = quote * 3 if long_form else quote
        self._advance(len(delim))
        start_line, start_col = self.line, self.col
        out = []
        while True:
            if self._eof():
                raise TurtleSyntaxError("unterminated string", start_line, start_col)
            if self.text.startswith(delim, self.pos):
                self._advance(len(delim))
                break
            ch = self._advance()
            if ch == "\\":
                esc = self._advance()
                if esc in _STRING_ESCAPES:
                    out.append(_STRING_ESCAPES[esc])
                elif esc == "u":
                    out.append(chr(int(self._advance(4), 16)))
                elif esc == "U":
                    out.append(chr(int(self._advance(8), 16)))
                else:
                    raise TurtleSyntaxError(f"invalid escape \\{esc}", self.line, self.col)
                continue
            if not long_form and ch == "\n":
                raise TurtleSyntaxError("newline in short string", start_line, start_col)
            out.append(ch)
        lexical = "".join(out)
        if self._peek() == "@":
            self._advance()
            m = _LANG_RE.match(self.text, self.pos)
            if not m:
                self._error("expected language tag")
            tag = m.group(0)
            self._advance(len(tag))
            return Literal(lexical, RDF.langString.value, tag)
        if self.text.startswith("^^", self.pos):
            self._advance(2)
            dt = self._parse_iri_like()
            if not isinstance(dt, IRI):
                self._error("datatype must be an IRI")
            return Literal(lexical, dt.value)
        return Literal(lexical)

    def _parse_number(self) -> Literal:
        m = _NUMBER_RE.match(self.text, self.pos)
        if not m:
            self._error("malformed number")
        lex = m.group(0)
        # Keep '.' out of the number when it terminates the statement: `5.`
        if lex.endswith(".") and "e" not in lex.lower():
            lex = lex[:-1]
        self._advance(len(lex))
        if "e" in lex.lower():
            dt = XSD.double
        elif "." in lex:
            dt = XSD.decimal
        else:
            dt = XSD.integer
        return Literal(lex, dt.value)

    def _emit(self, s: Term, p: IRI, o: Term):
        self.triples.append(Triple(s, p, o))


def parse_turtle(
    text: str, base: str | None = None
) -> tuple[list[Triple], dict[str, str]]:
    """Parse a Turtle document; returns (triples, prefix map).

    Blank node labels are document-scoped: merge into a store through
    ``TripleStore.load_turtle`` so they get remapped to store-scoped ids.
    """
    parser = TurtleParser(text, base=base)
    triples = parser.parse()
    return triples, dict(parser.prefixes)


# -- serialization ---------------------------------------------------------

_SAFE_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_\-]*$")


def _term_sort_key(term: Term):
    if isinstance(term, IRI):
        return (0, term.value)
    if isinstance(term, BlankNode):
        return (1, term.id)
    return (2, term.datatype, term.lexical, term.language or "")


class _Abbreviator:
    def __init__(self, prefixes: dict[str, str]):
        # Longest namespace wins when several prefixes share a stem.
        self.by_len = sorted(prefixes.items(), key=lambda kv: -len(kv[1]))

    def iri(self, iri: IRI) -> str:
        for prefix, ns in self.by_len:
            if iri.value.startswith(ns):
                local = iri.value[len(ns) :]
                if local == "" or _SAFE_LOCAL_RE.match(local):
                    return f"{prefix}:{local}"
        return iri.n3()


def serialize_turtle(
    triples,
    prefixes: dict[str, str] | None = None,
    rename_blanks: bool = True,
) -> str:
    """Write triples as Turtle, grouping by subject.

    Blank nodes are renamed to _:b0, _:b1, ... in output order unless
    ``rename_blanks`` is false (the write-ahead log needs stable ids).
    """
    prefixes = dict(prefixes or {})
    abbrev = _Abbreviator(prefixes)
    rename: dict[str, str] = {}

    def blank_name(node: BlankNode) -> str:
        if not rename_blanks:
            return f"_:{node.id}"
        if node.id not in rename:
            rename[node.id] = f"b{len(rename)}"
        return f"_:{rename[node.id]}"

    def fmt(term: Term) -> str:
        if isinstance(term, IRI):
            return abbrev.iri(term)
        if isinstance(term, BlankNode):
            return blank_name(term)
        out = '"' + escape_literal(term.lexical) + '"'
        if term.language is not None:
            return out + "@" + term.language
        if term.datatype != XSD.string.value:
            return out + "^^" + abbrev.iri(IRI(term.datatype))
        return out

    by_subject: dict[Term, dict[IRI, list[Term]]] = {}
    for t in triples:
        by_subject.setdefault(t.subject, {}).setdefault(t.predicate, []).append(t.object)

    lines = [f"@prefix {p}: <{ns}> ." for p, ns in sorted(prefixes.items())]
    if lines:
        lines.append("")
    for subject in sorted(by_subject, key=_term_sort_key):
        preds = by_subject[subject]
        parts = []
        ordered = sorted(preds, key=lambda p: (p != RDF.type, p.value))
        for pred in ordered:
            verb = "a" if pred == RDF.type else fmt(pred)
            objects = ", ".join(
                fmt(o) for o in sorted(set(preds[pred]), key=_term_sort_key)
            )
            parts.append(f"{verb} {objects}")
        lines.append(f"{fmt(subject)} " + " ;\n    ".join(parts) + " .")
    return "\n".join(lines) + "\n"
