import random

import pytest

from extrucat.ontology import Ontology, UnknownClassError
from extrucat.rdf import EXT, IRI, RDFS, TripleStore, Triple


@pytest.fixture
def ontology(ontology_store):
    return Ontology(ontology_store.snapshot())


def test_closure_down_from_root_reaches_every_component(ontology):
    closure = ontology.subclass_closure(EXT.ExtruderComponent, "down")
    names = {c.local_name for c in closure}
    assert {
        "ExtruderComponent",
        "Motor",
        "ACMotor",
        "DCMotor",
        "ExtrusionHead",
        "ExtrusionHeadForProfiles",
        "ExtrusionHeadForCircularProfiles",
        "ExtrusionHeadForNonCircularProfiles",
    } <= names


def test_closure_head_for_profiles(ontology):
    closure = ontology.subclass_closure(EXT.ExtrusionHeadForProfiles, "down")
    assert [c.local_name for c in closure] == [
        "ExtrusionHeadForProfiles",
        "ExtrusionHeadForCircularProfiles",
        "ExtrusionHeadForNonCircularProfiles",
    ]


def test_closure_is_reflexive_and_deterministic(ontology):
    first = ontology.subclass_closure(EXT.Motor, "down")
    assert first[0] == EXT.Motor
    assert first == ontology.subclass_closure(EXT.Motor, "down")


def test_unknown_class_raises(ontology):
    with pytest.raises(UnknownClassError):
        ontology.subclass_closure(EXT.Imaginary, "down")


def _matrix_closure(n: int, edges: set[tuple[int, int]]) -> list[list[bool]]:
    # Boolean-matrix transitive closure (Warshall), reflexive.
    reach = [[i == j for j in range(n)] for i in range(n)]
    for i, j in edges:
        reach[i][j] = True
    for k in range(n):
        for i in range(n):
            if reach[i][k]:
                row_k = reach[k]
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    return reach


def test_closure_matches_matrix_oracle_on_random_dags():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(3, 50)
        # Edges only from higher to lower index: guaranteed acyclic.
        edges = {
            (i, rng.randrange(i))
            for i in range(1, n)
            for _ in range(rng.randint(0, 2))
        }
        store = TripleStore()
        cls = [IRI(f"http://x/C{i}") for i in range(n)]
        store.insert([Triple(cls[i], RDFS.subClassOf, cls[j]) for i, j in edges])
        if not edges:
            continue
        ontology = Ontology(store.snapshot())
        reach = _matrix_closure(n, edges)
        for i in range(n):
            if cls[i] not in ontology.known_classes():
                continue
            up = set(ontology.subclass_closure(cls[i], "up"))
            expected_up = {cls[j] for j in range(n) if reach[i][j]}
            assert up == expected_up
            down = set(ontology.subclass_closure(cls[i], "down"))
            expected_down = {cls[j] for j in range(n) if reach[j][i]}
            assert down == expected_down


def test_part_tree_structure(ontology):
    tree, warnings = ontology.part_tree(EXT.Extruder)
    assert warnings == []
    assert tree.label == "Extruder"
    children = {c.label: c for c in tree.children}
    assert set(children) == {
        "Barrel",
        "Drive system",
        "Extrusion head",
        "Feed hopper",
        "Screw",
    }
    drive = children["Drive system"]
    assert {c.label for c in drive.children} == {"Motor", "Gearbox"}
    assert {c.label for c in children["Barrel"].children} == {
        "Heating zone",
        "Cooling fan",
    }
    # No IRI repeats on any root-to-leaf path.
    def paths(node, prefix):
        prefix = prefix + [node.iri]
        assert len(prefix) == len(set(prefix))
        for child in node.children:
            paths(child, prefix)

    paths(tree, [])


def test_part_tree_single_node_without_parthood(ontology):
    tree, warnings = ontology.part_tree(EXT.Screw)
    assert tree.children == [] and warnings == []


def test_part_tree_breaks_cycles():
    store = TripleStore()
    store.load_turtle(
        """
        @prefix owl: <http://www.w3.org/2002/07/owl#> .
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
        @prefix ext: <http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt#> .
        ext:A a owl:Class ; rdfs:subClassOf [ a owl:Restriction ;
            owl:onProperty ext:hasComponent ; owl:someValuesFrom ext:B ] .
        ext:B a owl:Class ; rdfs:subClassOf [ a owl:Restriction ;
            owl:onProperty ext:hasComponent ; owl:someValuesFrom ext:A ] .
        """
    )
    ontology = Ontology(store.snapshot())
    tree, warnings = ontology.part_tree(EXT.A)
    assert tree.children[0].label == "B"
    assert tree.children[0].children == []
    assert warnings and "cycle" in warnings[0]


def test_motor_form_schema_exact_values(ontology):
    schema = ontology.derive_form_schema(EXT.Motor)
    measures = {m.label: {u.label for u in m.units} for m in schema.measure_types}
    assert set(measures) == {"Electric potential", "Frequency"}
    assert "volt" in measures["Electric potential"]
    assert "hertz" in measures["Frequency"]
    symbols = {
        u.symbol for m in schema.measure_types for u in m.units
    }
    assert {"V", "Hz"} <= symbols
    assert schema.basic_fields == ("name", "manufacturer", "description")


def test_head_for_profiles_schema(ontology):
    schema = ontology.derive_form_schema(EXT.ExtrusionHeadForProfiles)
    fixed = {(f.label, f.value.label) for f in schema.fixed_properties}
    assert ("has type of extrudate", "Profile") in fixed
    refinements = {r.label: [c.label for c in r.candidates] for r in schema.refinement_properties}
    assert refinements["has shape of profile"] == ["Circular", "Non-circular"]
    assert refinements["has quantity of plates"] == ["2", "3"]


def test_subclass_schema_inherits_fixed_values(ontology):
    schema = ontology.derive_form_schema(EXT.ExtrusionHeadForCircularProfiles)
    fixed = {(f.label, f.value.label) for f in schema.fixed_properties}
    assert ("has type of extrudate", "Profile") in fixed  # inherited
    assert ("has shape of profile", "Circular") in fixed  # own restriction
    assert schema.refinement_properties == []  # no strict subclasses


def test_refinement_via_intersection_membership(ontology):
    # One candidate enters through an intersection list, one directly.
    schema = ontology.derive_form_schema(EXT.Motor)
    refinements = {r.label: [c.label for c in r.candidates] for r in schema.refinement_properties}
    assert refinements["has current type"] == ["Alternating current", "Direct current"]


def test_refinement_completeness_property(ontology):
    # Every hasValue restriction on a strict subclass must surface.
    for cls in (EXT.ExtrusionHead, EXT.ExtrusionHeadForProfiles, EXT.Motor):
        schema = ontology.derive_form_schema(cls)
        surfaced = {
            (r.property, c.label)
            for r in schema.refinement_properties
            for c in r.candidates
        }
        for sub in ontology.subclass_closure(cls, "down"):
            if sub == cls:
                continue
            for restriction in ontology.restrictions_on(sub, include_inherited=False):
                if restriction.kind != "hasValue":
                    continue
                value = ontology._property_value(restriction.filler)
                assert (restriction.property, value.label) in surfaced


def test_schema_with_no_restrictions_is_basic_only(ontology):
    schema = ontology.derive_form_schema(EXT.Gearbox)
    assert schema.fixed_properties == []
    assert schema.refinement_properties == []
    # Gearbox still has its measure applicability.
    assert [m.label for m in schema.measure_types] == ["Power"]


def test_class_without_any_axioms_yields_bare_schema(ontology):
    from extrucat.rdf import IRI

    schema = ontology.derive_form_schema(IRI("https://w3id.org/def/saref4inma#Equipment"))
    assert schema.basic_fields == ("name", "manufacturer", "description")
    assert schema.measure_types == []
    assert schema.fixed_properties == []
    assert schema.refinement_properties == []


def test_somevaluesfrom_surfaces_as_fixed_property():
    # Existential restrictions show their filler like universal ones do.
    store = TripleStore()
    store.load_turtle(
        """
        @prefix owl: <http://www.w3.org/2002/07/owl#> .
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
        @prefix ext: <http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt#> .
        ext:Sample a owl:Class ; rdfs:subClassOf [ a owl:Restriction ;
            owl:onProperty ext:hasCoating ; owl:someValuesFrom ext:ChromeCoating ] .
        ext:ChromeCoating a owl:Class ; rdfs:label "Chrome coating"@en .
        ext:hasCoating a owl:ObjectProperty ; rdfs:label "has coating"@en .
        """
    )
    ontology = Ontology(store.snapshot())
    schema = ontology.derive_form_schema(EXT.Sample)
    assert [(f.label, f.value.label) for f in schema.fixed_properties] == [
        ("has coating", "Chrome coating")
    ]


def test_deep_intersection_nesting_is_flagged():
    store = TripleStore()
    store.load_turtle(
        """
        @prefix owl: <http://www.w3.org/2002/07/owl#> .
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
        @prefix ext: <http://bdi.si.ehu.es/bdi/ontologies/ExtruOnt#> .
        ext:Odd a owl:Class ; rdfs:subClassOf [ owl:intersectionOf (
            [ owl:intersectionOf ( [ a owl:Restriction ;
                owl:onProperty ext:p ; owl:hasValue 1 ] ) ] ) ] .
        """
    )
    ontology = Ontology(store.snapshot())
    with pytest.raises(ValueError, match="intersectionOf"):
        ontology.restrictions_on(EXT.Odd)


def test_schema_stability_across_calls(ontology):
    a = ontology.derive_form_schema(EXT.Motor).to_json()
    b = ontology.derive_form_schema(EXT.Motor).to_json()
    assert a == b


def test_label_preferences():
    store = TripleStore()
    store.load_turtle(
        """
        @prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
        @prefix x: <http://x/> .
        x:A rdfs:label "anglais"@fr , "english"@en .
        x:B rdfs:label "solo"@fr .
        x:C rdfs:subClassOf x:A .
        """
    )
    ontology = Ontology(store.snapshot())
    assert ontology.label(IRI("http://x/A")) == "english"
    assert ontology.label(IRI("http://x/B")) == "solo"
    assert ontology.label(IRI("http://x/C")) == "C"  # local-name fallback


def test_applicable_solutions_inheritance(demo):
    from extrucat.rdf import INST

    ontology = Ontology(demo.store.snapshot(), demo.config)
    # AC motor instance class picks up the generic motor fix.
    acmotor = ontology.applicable_solutions(EXT.ACMotor)
    assert INST["sol-motor-overheating"] in acmotor
    assert INST["sol-extruder-stop"] not in acmotor  # related to Extruder, not a superclass
    # Sibling classes see nothing.
    assert ontology.applicable_solutions(EXT.Gearbox) == []
    # Class with no related solutions at all.
    assert ontology.applicable_solutions(EXT.HeatingZone) == []
