import pytest

from extrucat.rdf import IRI, BlankNode, Literal, RDF, Triple, XSD


def test_term_equality_is_structural():
    assert IRI("http://x/a") == IRI("http://x/a")
    assert BlankNode("b1") == BlankNode("b1")
    assert BlankNode("b1") != BlankNode("b2")
    assert Literal("5", XSD.integer.value) == Literal("5", XSD.integer.value)
    assert Literal("5", XSD.integer.value) != Literal("5", XSD.double.value)


def test_language_tag_forces_langstring():
    lit = Literal("hola", language="es")
    assert lit.datatype == RDF.langString.value
    with pytest.raises(ValueError):
        Literal("x", RDF.langString.value)  # tag missing


def test_triple_rejects_bad_positions():
    s, p, o = IRI("http://x/s"), IRI("http://x/p"), Literal("v")
    with pytest.raises(ValueError):
        Triple(Literal("nope"), p, o)
    with pytest.raises(ValueError):
        Triple(s, BlankNode("b"), o)
    assert Triple(s, p, o).object == o


def test_numeric_literals():
    assert Literal.integer(7).numeric_value() == 7
    assert float(Literal.double(2.5).numeric_value()) == 2.5
    assert not Literal.string("7").is_numeric
    with pytest.raises(ValueError):
        Literal.string("7").numeric_value()


def test_local_name():
    assert IRI("http://x/onto#Motor").local_name == "Motor"
    assert IRI("http://x/onto/Motor").local_name == "Motor"


def test_n3_escaping():
    lit = Literal('say "hi"\n')
    assert lit.n3() == '"say \\"hi\\"\\n"'
