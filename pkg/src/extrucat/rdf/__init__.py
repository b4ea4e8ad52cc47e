from .terms import (
    DCTERMS,
    EXT,
    INST,
    IRI,
    OM,
    OWL,
    RDF,
    RDFS,
    S4INMA,
    XSD,
    BlankNode,
    Literal,
    Namespace,
    Term,
    Triple,
    boolean_value,
)
from .turtle import TurtleSyntaxError, parse_turtle, serialize_turtle
from .store import Snapshot, TripleStore
from .isomorph import isomorphic

__all__ = [
    "IRI",
    "BlankNode",
    "Literal",
    "Term",
    "Triple",
    "Namespace",
    "RDF",
    "RDFS",
    "OWL",
    "XSD",
    "OM",
    "DCTERMS",
    "S4INMA",
    "EXT",
    "INST",
    "boolean_value",
    "parse_turtle",
    "serialize_turtle",
    "TurtleSyntaxError",
    "TripleStore",
    "Snapshot",
    "isomorphic",
]
