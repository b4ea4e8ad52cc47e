import random

import pytest

from extrucat.rdf import (
    IRI,
    BlankNode,
    Literal,
    RDF,
    Triple,
    TripleStore,
    TurtleSyntaxError,
    XSD,
    isomorphic,
    parse_turtle,
    serialize_turtle,
)

PREFIXES = """
@prefix : <http://example.com/> .
@prefix s4inma: <https://w3id.org/def/saref4inma#> .
@prefix om: <http://www.ontology-of-units-of-measure.org/resource/om-2/> .
@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .
"""


def test_a_keyword_expands_to_rdf_type():
    triples, _ = parse_turtle(PREFIXES + ":E01 a s4inma:Equipment .")
    assert triples == [
        Triple(
            IRI("http://example.com/E01"),
            RDF.type,
            IRI("https://w3id.org/def/saref4inma#Equipment"),
        )
    ]


def test_typed_literal():
    triples, _ = parse_turtle(PREFIXES + ':m om:hasNumericalValue "40.5"^^xsd:double .')
    assert triples[0].object == Literal("40.5", XSD.double.value)


def test_collection_expands_to_first_rest_chain():
    # Hand expansion: one :list triple plus first/rest pairs ending in rdf:nil.
    triples, _ = parse_turtle(PREFIXES + ":c :list ( :x :y ) .")
    assert len(triples) == 5
    by_pred = {}
    for t in triples:
        by_pred.setdefault(t.predicate, []).append(t)
    assert len(by_pred[RDF.first]) == 2
    rests = by_pred[RDF.rest]
    assert {
        o.value if isinstance(o, IRI) else "blank" for o in (t.object for t in rests)
    } == {RDF.nil.value, "blank"}
    head = by_pred[IRI("http://example.com/list")][0].object
    assert isinstance(head, BlankNode)


def test_empty_collection_is_nil():
    triples, _ = parse_turtle(PREFIXES + ":c :list ( ) .")
    assert triples == [
        Triple(IRI("http://example.com/c"), IRI("http://example.com/list"), RDF.nil)
    ]


def test_numeric_and_boolean_shorthands():
    triples, _ = parse_turtle(PREFIXES + ":s :p 5 ; :q 2.5 ; :r 1e3 ; :t true .")
    objs = {t.predicate.local_name: t.object for t in triples}
    assert objs["p"] == Literal("5", XSD.integer.value)
    assert objs["q"] == Literal("2.5", XSD.decimal.value)
    assert objs["r"] == Literal("1e3", XSD.double.value)
    assert objs["t"] == Literal("true", XSD.boolean.value)


def test_object_and_predicate_lists():
    triples, _ = parse_turtle(PREFIXES + ':s :p "a", "b" ; :q "c" .')
    assert len(triples) == 3


def test_language_tagged_literal():
    triples, _ = parse_turtle(PREFIXES + ':s :p "hello"@en .')
    assert triples[0].object.language == "en"


def test_undefined_prefix_reports_position():
    with pytest.raises(TurtleSyntaxError) as err:
        parse_turtle(":x :y :z .")
    assert "undefined prefix" in str(err.value)
    assert err.value.line == 1


def test_syntax_error_carries_line_and_column():
    with pytest.raises(TurtleSyntaxError) as err:
        parse_turtle(PREFIXES + ":s :p @ .")
    assert err.value.line == 6


def test_relative_iri_without_base_rejected():
    with pytest.raises(TurtleSyntaxError):
        parse_turtle("<rel> <http://x/p> <http://x/o> .")


def test_relative_iri_resolved_against_base():
    triples, _ = parse_turtle("<rel> <http://x/p> <o> .", base="http://x/dir/")
    assert triples[0].subject == IRI("http://x/dir/rel")


def test_prefix_sparql_style_directive():
    triples, _ = parse_turtle("PREFIX ex: <http://x/>\nex:a ex:b ex:c .")
    assert triples[0].subject == IRI("http://x/a")


def test_blank_node_property_list():
    triples, _ = parse_turtle(PREFIXES + ":s :p [ :k 1 ; :l 2 ] .")
    assert len(triples) == 3


def test_empty_store_serializes_to_prefixes_only():
    store = TripleStore(prefixes={"ex": "http://x/"})
    text = store.export_turtle()
    assert "@prefix ex: <http://x/> ." in text
    assert not [l for l in text.splitlines() if l and not l.startswith("@prefix")]


def test_motor_feature_roundtrip():
    # The annotation shape produced when a motor's features are described.
    doc = PREFIXES + """
:E01-motor a <http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt#Motor> ;
    <http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt#hasFeature> [
        a om:Frequency ;
        om:hasNumericalValue "60.0"^^xsd:double ;
        om:hasUnit om:hertz ] ;
    <http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt#hasMinimumFeature> [
        a om:ElectricPotential ;
        om:hasNumericalValue "230.0"^^xsd:double ;
        om:hasUnit om:volt ] .
"""
    store = TripleStore()
    store.load_turtle(doc)
    reparsed, _ = parse_turtle(store.export_turtle())
    assert isomorphic(store.snapshot(), reparsed)


def _random_graph(rng: random.Random) -> list[Triple]:
    nodes = [IRI(f"http://x/n{i}") for i in range(rng.randint(1, 6))]
    nodes += [BlankNode(f"g{i}") for i in range(rng.randint(0, 4))]
    preds = [IRI(f"http://x/p{i}") for i in range(rng.randint(1, 4))]
    lits = [
        Literal.integer(rng.randint(0, 9)),
        Literal("hei", language="no"),
        Literal.string("plain"),
        Literal.double(1.5),
    ]
    triples = set()
    for _ in range(rng.randint(1, 25)):
        s = rng.choice(nodes)
        o = rng.choice(nodes + lits)
        triples.add(Triple(s, rng.choice(preds), o))
    return list(triples)


def test_roundtrip_on_random_graphs():
    rng = random.Random(7)
    for _ in range(50):
        graph = _random_graph(rng)
        text = serialize_turtle(graph, {"x": "http://x/"})
        reparsed, _ = parse_turtle(text)
        assert isomorphic(graph, reparsed), text
