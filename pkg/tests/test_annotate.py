import pytest

from extrucat.annotate import (
    BatchSpec,
    CadModelRef,
    ComponentSubmission,
    ExtruderSubmission,
    IrdiMapping,
    QuantityFeature,
    SubmissionError,
    annotate_cad,
    build_cad_triples,
    build_extruder_triples,
    delete_extruder,
    enrich_with_irdi,
    file_sha256,
    register_extruder,
    set_visible,
)
from extrucat.config import AppConfig
from extrucat.ontology import Ontology
from extrucat.rdf import EXT, INST, OM, RDF, Literal
from extrucat.sparql import evaluate, parse_query

from test_query_parser import BATCH_SIZE_QUERY


def _motor_submission(local_id="EX1") -> ExtruderSubmission:
    return ExtruderSubmission(
        local_id=local_id,
        name="Test machine",
        manufacturer="Works",
        description="A machine under test.",
        batch=BatchSpec(
            item_label="200 ml bottle",
            description="Test batch",
            volume=200.0,
            unit=OM.millilitre,
        ),
        dimensions=(2.0, 2.0, 4.0),
        throughput_bph=900.0,
        components=[
            ComponentSubmission(
                local_id="motor",
                component_type=EXT.Motor,
                label="Test motor",
                features=[
                    QuantityFeature(OM.Frequency, OM.hertz, 60.0, "exact"),
                    QuantityFeature(OM.ElectricPotential, OM.volt, 230.0, "minimum"),
                    QuantityFeature(OM.ElectricPotential, OM.volt, 460.0, "maximum"),
                ],
            )
        ],
    )


def test_motor_features_become_three_quantity_nodes():
    triples = build_extruder_triples(_motor_submission())
    feature_nodes = {
        t.object
        for t in triples
        if t.predicate.local_name
        in ("hasFeature", "hasMinimumFeature", "hasMaximumFeature")
    }
    units = [
        t.object for t in triples if t.predicate == OM.hasUnit and t.subject in feature_nodes
    ]
    assert sorted(u.local_name for u in units) == ["hertz", "volt", "volt"]
    by_qualifier = {
        t.predicate.local_name: t.object
        for t in triples
        if t.predicate.local_name in ("hasFeature", "hasMinimumFeature", "hasMaximumFeature")
    }
    assert set(by_qualifier) == {"hasFeature", "hasMinimumFeature", "hasMaximumFeature"}


def test_zero_components_yields_instance_triples_only(ontology_store, tmp_path):
    sub = _motor_submission()
    sub.components = []
    iri = register_extruder(ontology_store, sub)
    snap = ontology_store.snapshot()
    assert snap.value(iri, RDF.type) is not None
    assert snap.objects(iri, EXT.hasComponent) == []


def test_batch_query_answers_over_generated_triples(ontology_store):
    sub = _motor_submission(local_id="E01")
    register_extruder(ontology_store, sub)
    query = parse_query(BATCH_SIZE_QUERY)
    rows = evaluate(ontology_store.snapshot(), query).rows
    assert len(rows) == 1
    assert rows[0]["value"] == Literal.double(200.0)
    assert rows[0]["batch"] == INST["E01-batch"]
    assert rows[0]["description"] == Literal.string("Test batch")


def test_determinism_same_submission_same_triples():
    assert build_extruder_triples(_motor_submission()) == build_extruder_triples(
        _motor_submission()
    )


def test_validation_lists_every_offending_field(ontology_store):
    sub = _motor_submission()
    sub.local_id = "bad id!"
    sub.throughput_bph = -5
    sub.dimensions = (0.0, 2.0, 4.0)
    sub.components[0].features.append(QuantityFeature(OM.Length, OM.metre, 1.0))
    sub.components[0].features.append(QuantityFeature(OM.Frequency, OM.volt, 60.0))
    with pytest.raises(SubmissionError) as err:
        register_extruder(ontology_store, sub)
    text = str(err.value)
    assert "local_id" in text
    assert "throughput_bph" in text
    assert "dimensions.width" in text
    assert "Length not applicable" in text
    assert "unit volt not allowed" in text
    assert len(err.value.errors) == 5


def _irdi(ontology_store):
    return IrdiMapping.load(AppConfig().irdi_path), Ontology(ontology_store.snapshot())


def test_irdi_direct_mapping(ontology_store):
    mapping, ontology = _irdi(ontology_store)
    result = enrich_with_irdi(EXT.Motor, mapping, ontology)
    assert len(result.triples) == 1
    assert result.triples[0].subject == EXT.Motor
    assert not result.inherited


def test_irdi_inherited_from_superclass(ontology_store):
    mapping, ontology = _irdi(ontology_store)
    result = enrich_with_irdi(EXT.ACMotor, mapping, ontology)
    assert result.inherited
    assert result.source_class == EXT.Motor
    assert result.triples[0].subject == EXT.ACMotor
    assert result.triples[0].object == Literal.string("0173-1#01-AKE795#017")


def test_irdi_absent_everywhere_yields_nothing(ontology_store):
    mapping, ontology = _irdi(ontology_store)
    result = enrich_with_irdi(EXT.Barrel, mapping, ontology)
    assert result.triples == [] and result.source_class is None


def test_irdi_mapping_rejects_malformed_file(tmp_path):
    bad = tmp_path / "irdi.csv"
    bad.write_text("foo,bar\nx,y\n", encoding="utf-8")
    with pytest.raises(ValueError, match="header"):
        IrdiMapping.load(bad)


def _cad_ref(tmp_path, content=b"mesh-bytes"):
    path = tmp_path / "model.gltf"
    path.write_bytes(content)
    return CadModelRef(
        document_id="doc-1",
        element_id="elem-1",
        file_path=path,
        format="glTF",
        position=(0.0, 0.0, -1.0),
        checksum=file_sha256(path),
    )


def test_cad_triples_record_position(tmp_path):
    ref = _cad_ref(tmp_path)
    triples = build_cad_triples(INST["E01-hopper"], ref)
    coords = {
        t.predicate.local_name: t.object
        for t in triples
        if t.predicate.local_name in ("xCoordinate", "yCoordinate", "zCoordinate")
    }
    assert coords["xCoordinate"] == Literal.double(0.0)
    assert coords["yCoordinate"] == Literal.double(0.0)
    assert coords["zCoordinate"] == Literal.double(-1.0)


def test_cad_annotation_idempotent(ontology_store, tmp_path):
    ref = _cad_ref(tmp_path)
    r1 = annotate_cad(ontology_store, INST["E01-hopper"], ref)
    r2 = annotate_cad(ontology_store, INST["E01-hopper"], ref)
    assert r1 == r2  # unchanged re-annotation does not bump the revision


def test_cad_changed_checksum_replaces_old_triples(ontology_store, tmp_path):
    ref = _cad_ref(tmp_path)
    r1 = annotate_cad(ontology_store, INST["E01-hopper"], ref)
    ref2 = _cad_ref(tmp_path, content=b"different-bytes")
    r2 = annotate_cad(ontology_store, INST["E01-hopper"], ref2)
    assert r2 == r1 + 1
    snap = ontology_store.snapshot()
    checksums = [
        t.object.lexical
        for t in snap.match(predicate=EXT.checksum)
    ]
    assert checksums == [ref2.checksum]


def test_cad_missing_file_rejected(tmp_path):
    ref = _cad_ref(tmp_path)
    ref.file_path.unlink()
    with pytest.raises(FileNotFoundError):
        build_cad_triples(INST["E01-hopper"], ref)


def test_cad_checksum_mismatch_rejected(tmp_path):
    ref = _cad_ref(tmp_path)
    ref.file_path.write_bytes(b"tampered")
    with pytest.raises(ValueError, match="checksum"):
        build_cad_triples(INST["E01-hopper"], ref)


def test_set_visible_changes_only_the_flag(demo):
    e01 = INST["E01"]
    before = set(demo.store.snapshot())
    set_visible(demo.store, e01, False, demo.config)
    after = set(demo.store.snapshot())
    assert (before - after) == {
        t for t in before if t.subject == e01 and t.predicate == EXT.visible
    }
    added = after - before
    assert {t.predicate for t in added} == {EXT.visible}
    assert demo.catalogue.get_all_extruders()[0].id != e01.value


def test_delete_removes_whole_closure(demo):
    e01 = INST["E01"]
    dangling = delete_extruder(demo.store, e01)
    snap = demo.store.snapshot()
    assert list(snap.match(subject=e01)) == []
    assert list(snap.match(object=e01)) == []
    # Components, quantity nodes and models went with it.
    assert list(snap.match(subject=INST["E01-motor"])) == []
    assert list(snap.match(subject=INST["E01-hopper-model"])) == []
    assert list(snap.match(subject=INST["E01-batch"])) == []
    assert dangling == []


def test_delete_leaves_other_extruders_untouched(demo):
    counts = {
        lid: len(list(demo.store.snapshot().match(subject=INST[lid])))
        for lid in ("E02", "E03")
    }
    delete_extruder(demo.store, INST["E01"])
    snap = demo.store.snapshot()
    for lid, count in counts.items():
        assert len(list(snap.match(subject=INST[lid]))) == count


def test_delete_unknown_extruder(demo):
    from extrucat.annotate import UnknownExtruderError

    with pytest.raises(UnknownExtruderError):
        delete_extruder(demo.store, INST["E99"])
