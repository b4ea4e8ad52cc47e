"""RDF term and triple model.

Terms are immutable value objects: equality is structural, blank nodes
compare by their local id within one store.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, InvalidOperation


class Namespace:
    """IRI factory for a namespace, e.g. ``RDF.type`` or ``OM["hasUnit"]``."""

    def __init__(self, base: str):
        self.base = base

    def __getattr__(self, local: str) -> "IRI":
        if local.startswith("_"):
            raise AttributeError(local)
        return IRI(self.base + local)

    def __getitem__(self, local: str) -> "IRI":
        return IRI(self.base + local)

    def __repr__(self) -> str:
        return f"Namespace({self.base!r})"


@dataclass(frozen=True, slots=True)
class IRI:
    value: str

    def n3(self) -> str:
        return f"<{self.value}>"

    @property
    def local_name(self) -> str:
        v = self.value
        for sep in ("#", "/", ":"):
            idx = v.rfind(sep)
            if idx >= 0 and idx < len(v) - 1:
                return v[idx + 1 :]
        return v

    def __repr__(self) -> str:
        return f"IRI({self.value!r})"


@dataclass(frozen=True, slots=True)
class BlankNode:
    id: str

    def n3(self) -> str:
        return f"_:{self.id}"

    def __repr__(self) -> str:
        return f"BlankNode({self.id!r})"


RDF = Namespace("http://www.w3.org/1999/02/22-rdf-syntax-ns#")
RDFS = Namespace("http://www.w3.org/2000/01/rdf-schema#")
OWL = Namespace("http://www.w3.org/2002/07/owl#")
XSD = Namespace("http://www.w3.org/2001/XMLSchema#")
DCTERMS = Namespace("http://purl.org/dc/terms/")
OM = Namespace("http://www.ontology-of-units-of-measure.org/resource/om-2/")
S4INMA = Namespace("https://w3id.org/def/saref4inma#")

#: Vocabulary namespace of the bundled extruder ontology.
EXT = Namespace("http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt#")
#: Namespace for catalogue instances (extruders, components, quantity nodes).
INST = Namespace("http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt/Extruder01#")

WELL_KNOWN_PREFIXES = {
    "rdf": RDF.base,
    "rdfs": RDFS.base,
    "owl": OWL.base,
    "xsd": XSD.base,
}

NUMERIC_DATATYPES = frozenset(
    {XSD.integer.value, XSD.decimal.value, XSD.double.value, XSD.float.value}
)


@dataclass(frozen=True, slots=True)
class Literal:
    lexical: str
    datatype: str = XSD.string.value
    language: str | None = None

    def __post_init__(self):
        # A language tag forces rdf:langString; a langString needs a tag.
        if self.language is not None and self.datatype != RDF.langString.value:
            object.__setattr__(self, "datatype", RDF.langString.value)
        if self.datatype == RDF.langString.value and self.language is None:
            raise ValueError("rdf:langString literal requires a language tag")

    def n3(self) -> str:
        out = '"' + escape_literal(self.lexical) + '"'
        if self.language is not None:
            return out + "@" + self.language
        if self.datatype != XSD.string.value:
            return out + "^^<" + self.datatype + ">"
        return out

    @property
    def is_numeric(self) -> bool:
        return self.datatype in NUMERIC_DATATYPES

    def numeric_value(self) -> Decimal:
        """Value of a numeric literal as Decimal; raises ValueError otherwise."""
        if not self.is_numeric:
            raise ValueError(f"not a numeric literal: {self.n3()}")
        try:
            return Decimal(self.lexical)
        except InvalidOperation as exc:
            raise ValueError(f"bad numeric lexical form: {self.lexical!r}") from exc

    @staticmethod
    def string(value: str) -> "Literal":
        return Literal(value)

    @staticmethod
    def integer(value: int) -> "Literal":
        return Literal(str(int(value)), XSD.integer.value)

    @staticmethod
    def double(value: float) -> "Literal":
        lex = repr(float(value))
        return Literal(lex, XSD.double.value)

    @staticmethod
    def decimal(value) -> "Literal":
        return Literal(str(Decimal(str(value))), XSD.decimal.value)

    @staticmethod
    def boolean(value: bool) -> "Literal":
        return Literal("true" if value else "false", XSD.boolean.value)

    def __repr__(self) -> str:
        return f"Literal({self.n3()})"


Term = IRI | BlankNode | Literal


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Term
    predicate: Term
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError("triple subject must not be a literal")
        if not isinstance(self.predicate, IRI):
            raise ValueError("triple predicate must be an IRI")

    def __iter__(self):
        return iter((self.subject, self.predicate, self.object))

    def n3(self) -> str:
        return f"{self.subject.n3()} {self.predicate.n3()} {self.object.n3()} ."


_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
    "\b": "\\b",
    "\f": "\\f",
}


def escape_literal(text: str) -> str:
    return "".join(_ESCAPES.get(c, c) for c in text)


def boolean_value(term: Term) -> bool | None:
    """True/False for an xsd:boolean literal, else None."""
    if isinstance(term, Literal) and term.datatype == XSD.boolean.value:
        return term.lexical.strip() in ("true", "1")
    return None
