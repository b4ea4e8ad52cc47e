import pytest

from extrucat.config import AppConfig
from extrucat.rdf import INST
from extrucat.sparql import (
    Fragment,
    FragmentSyntaxError,
    PlaceholderError,
    TemplateRegistry,
    UnknownTemplateError,
    evaluate,
)


@pytest.fixture
def registry():
    return TemplateRegistry(AppConfig().templates_dir)


def test_catalogue_template_binds_without_placeholders(registry):
    query = registry.bind("allExtrudersList")
    assert {v for p in query.patterns for v in (p.subject, p.object)}  # parsed
    assert query.select_vars == ["e", "name", "manufacturer", "description", "visible"]


def test_unknown_template(registry):
    with pytest.raises(UnknownTemplateError):
        registry.bind("nope")


def test_missing_substitution_rejected(registry):
    with pytest.raises(PlaceholderError):
        registry.bind("partsByExtruderId")


def test_unknown_placeholder_rejected(registry):
    with pytest.raises(PlaceholderError):
        registry.bind("allExtrudersList", {"FILTERS": Fragment("")})


def test_term_substitution_renders_safely(registry):
    query = registry.bind("partsByExtruderId", {"EXTRUDER": INST["E01"]})
    assert any(
        not isinstance(p.subject, str) and p.subject == INST["E01"] for p in query.patterns
    )


def test_empty_filter_fragment_is_identity(registry, demo):
    unfiltered = registry.bind("BasicSearchQuery", {"FILTERS": Fragment("")})
    plain = registry.bind("allExtrudersList")
    snap = demo.store.snapshot()
    ids_a = {r["e"] for r in evaluate(snap, unfiltered).rows}
    ids_b = {r["e"] for r in evaluate(snap, plain).rows}
    assert ids_a == ids_b


def test_filter_fragment_excludes_low_throughput(demo, registry):
    fragment = Fragment("?e ext:bottlesPerHour ?bph . FILTER(?bph >= 1250)")
    query = registry.bind("BasicSearchQuery", {"FILTERS": fragment})
    rows = evaluate(demo.store.snapshot(), query).rows
    ids = {r["e"].local_name for r in rows}
    assert "E01" in ids  # 1300 bottles/hour
    assert "E02" not in ids  # 1000 bottles/hour


def test_malformed_fragment_rejected_before_evaluation(registry):
    with pytest.raises(FragmentSyntaxError):
        registry.bind("BasicSearchQuery", {"FILTERS": Fragment("FILTER(?v >")})


def test_structural_injection_rejected(registry):
    # A fragment cannot close the group and smuggle new query structure in.
    evil = Fragment("?e ?p ?o . } SELECT ?x WHERE { ?x ?y ?z")
    with pytest.raises(FragmentSyntaxError):
        registry.bind("BasicSearchQuery", {"FILTERS": evil})


def test_fragment_only_allowed_in_filters_slot(registry):
    with pytest.raises(PlaceholderError):
        registry.bind("partsByExtruderId", {"EXTRUDER": Fragment("?x ?y ?z")})


def test_bound_templates_always_reparse(registry, demo):
    fragments = [
        "",
        "?e ext:bottlesPerHour ?bph . FILTER(?bph >= 100)",
        "FILTER(?visible = true)",
    ]
    for text in fragments:
        query = registry.bind("BasicSearchQuery", {"FILTERS": Fragment(text)})
        evaluate(demo.store.snapshot(), query)  # should not raise
