"""Turn admin form submissions into RDF annotations.

Extruder instances, their components with typed quantity features, the
restriction-encoded production batch, 3D model metadata and IRDI enrichment
all become triples in the application vocabulary. Builders are pure; the
store-mutating helpers at the bottom funnel through the store's serialized
write path.

Blank node ids are derived from the submission's local id, so the same
submission always produces the same triples and re-registration is
idempotent.
"""

from __future__ import annotations

import csv
import hashlib
import logging
import math
import re
from dataclasses import dataclass, field
from decimal import Decimal
from pathlib import Path

from .config import AppConfig, qualifier_property
from .ontology import Ontology
from .rdf.store import TripleStore
from .rdf.terms import (
    DCTERMS,
    EXT,
    INST,
    OM,
    OWL,
    RDF,
    RDFS,
    S4INMA,
    BlankNode,
    IRI,
    Literal,
    Term,
    Triple,
)

logger = logging.getLogger(__name__)

LOCAL_ID_RE = re.compile(r"^[A-Za-z0-9_-]+$")

#: Accepted volume units and their factor to millilitres.
VOLUME_UNIT_ML = {
    OM.millilitre: 1.0,
    OM.litre: 1000.0,
}

#: Point volumes widen to +-10% for search matching; ranges are taken as given.
POINT_VOLUME_TOLERANCE = 0.10


class SubmissionError(ValueError):
    """Validation failure listing every offending field."""

    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


class UnknownExtruderError(KeyError):
    pass


@dataclass
class QuantityFeature:
    measure_type: IRI
    unit: IRI
    value: float
    qualifier: str = "exact"  # exact | minimum | maximum
    description: str | None = None


@dataclass
class CadModelRef:
    document_id: str
    element_id: str
    file_path: Path  # on-disk location, used for verification
    format: str  # glTF | OBJ | STL | X3D
    position: tuple[float, float, float]
    checksum: str
    stored_path: str | None = None  # path literal to annotate (default: file_path)


@dataclass
class ComponentSubmission:
    local_id: str
    component_type: IRI
    label: str
    features: list[QuantityFeature] = field(default_factory=list)
    cad: CadModelRef | None = None
    part_code: str | None = None


@dataclass
class BatchSpec:
    item_label: str
    description: str
    volume: float | None = None
    volume_range: tuple[float, float] | None = None
    unit: IRI = OM.millilitre
    max_item_width_m: float | None = None
    max_item_height_m: float | None = None


@dataclass
class ExtruderSubmission:
    local_id: str
    name: str
    manufacturer: str
    description: str
    visible: bool = True
    batch: BatchSpec | None = None
    dimensions: tuple[float, float, float] | None = None  # width, height, length in metres
    throughput_bph: float | None = None
    components: list[ComponentSubmission] = field(default_factory=list)

    @property
    def iri(self) -> IRI:
        return INST[self.local_id]


# -- IRDI mapping ---------------------------------------------------------------


@dataclass
class IrdiEnrichment:
    triples: list[Triple]
    source_class: IRI | None
    inherited: bool


class IrdiMapping:
    """CSV with columns class_iri,irdi mapping ontology classes to codes."""

    def __init__(self, entries: dict[str, str]):
        self.entries = entries

    @classmethod
    def load(cls, path: Path | str) -> "IrdiMapping":
        entries: dict[str, str] = {}
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or set(reader.fieldnames) != {"class_iri", "irdi"}:
                raise ValueError(
                    f"{path}: expected CSV header 'class_iri,irdi', got {reader.fieldnames}"
                )
            for lineno, row in enumerate(reader, 2):
                if not row["class_iri"] or not row["irdi"]:
                    raise ValueError(f"{path}:{lineno}: empty class_iri or irdi")
                entries[row["class_iri"]] = row["irdi"]
        return cls(entries)

    def lookup(self, component_type: IRI, ontology: Ontology) -> tuple[IRI, str] | None:
        """Nearest mapped class walking up the hierarchy, or None."""
        for cls in ontology.subclass_closure(component_type, "up"):
            code = self.entries.get(cls.value)
            if code is not None:
                return cls, code
        return None


def enrich_with_irdi(
    component_type: IRI, mapping: IrdiMapping, ontology: Ontology
) -> IrdiEnrichment:
    found = mapping.lookup(component_type, ontology)
    if found is None:
        logger.info("no IRDI entry for %s or any superclass", component_type.value)
        return IrdiEnrichment([], None, False)
    source, code = found
    triple = Triple(component_type, EXT.irdi, Literal.string(code))
    return IrdiEnrichment([triple], source, source != component_type)


# -- validation --------------------------------------------------------------------


def _positive(value, name: str, errors: list[str]):
    if value is None:
        return
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        errors.append(f"{name} must be a finite positive number, got {value!r}")


def validate_submission(sub: ExtruderSubmission, ontology: Ontology) -> list[str]:
    errors: list[str] = []
    if not LOCAL_ID_RE.match(sub.local_id):
        errors.append(f"local_id {sub.local_id!r} must match [A-Za-z0-9_-]+")
    for name in ("name", "manufacturer", "description"):
        if not getattr(sub, name).strip():
            errors.append(f"{name} must not be empty")
    if sub.dimensions is not None:
        for axis, value in zip(("width", "height", "length"), sub.dimensions):
            _positive(value, f"dimensions.{axis}", errors)
    _positive(sub.throughput_bph, "throughput_bph", errors)

    batch = sub.batch
    if batch is not None:
        if batch.volume is not None and batch.volume_range is not None:
            errors.append("batch: give either a point volume or a range, not both")
        _positive(batch.volume, "batch.volume", errors)
        if batch.volume_range is not None:
            lo, hi = batch.volume_range
            _positive(lo, "batch.volume_range[0]", errors)
            _positive(hi, "batch.volume_range[1]", errors)
            if lo > hi:
                errors.append("batch.volume_range: min exceeds max")
        if batch.unit not in VOLUME_UNIT_ML:
            errors.append(f"batch.unit {batch.unit.value} is not a known volume unit")
        _positive(batch.max_item_width_m, "batch.max_item_width_m", errors)
        _positive(batch.max_item_height_m, "batch.max_item_height_m", errors)

    seen_components = set()
    for comp in sub.components:
        prefix = f"component {comp.local_id!r}"
        if not LOCAL_ID_RE.match(comp.local_id):
            errors.append(f"{prefix}: bad local_id")
            continue
        if comp.local_id in seen_components:
            errors.append(f"{prefix}: duplicate local_id")
        seen_components.add(comp.local_id)
        try:
            schema = ontology.derive_form_schema(comp.component_type)
        except KeyError:
            errors.append(f"{prefix}: unknown component type {comp.component_type.value}")
            continue
        allowed_types = {m.iri for m in schema.measure_types}
        for i, feat in enumerate(comp.features):
            where = f"{prefix}.features[{i}]"
            if feat.measure_type not in allowed_types:
                errors.append(
                    f"{where}: measure type {feat.measure_type.local_name} not applicable "
                    f"to {comp.component_type.local_name}"
                )
            elif feat.unit.value not in schema.allowed_units(feat.measure_type):
                errors.append(
                    f"{where}: unit {feat.unit.local_name} not allowed for "
                    f"{feat.measure_type.local_name}"
                )
            if not (isinstance(feat.value, (int, float)) and math.isfinite(feat.value)):
                errors.append(f"{where}: value must be finite")
            if feat.qualifier not in ("exact", "minimum", "maximum"):
                errors.append(f"{where}: unknown qualifier {feat.qualifier!r}")
    return errors


# -- triple building ------------------------------------------------------------------


def _volume_ml(value: float, unit: IRI) -> float:
    return value * VOLUME_UNIT_ML[unit]


def build_batch_triples(sub: ExtruderSubmission) -> list[Triple]:
    """Production batch encoded as a restriction on the instance's type:
    the inverse of the needs-equipment property, all values from the
    intersection of the batch class and a has-value size node. This is the
    exact shape the catalogue's batch-size query reads."""
    batch = sub.batch
    if batch is None:
        return []
    e = sub.iri
    lid = sub.local_id
    batch_class = INST[f"{lid}-batch"]
    restriction = BlankNode(f"{lid}.restr")
    all_values = BlankNode(f"{lid}.av")
    cell1 = BlankNode(f"{lid}.list1")
    cell2 = BlankNode(f"{lid}.list2")
    size_restr = BlankNode(f"{lid}.sizeRestr")
    size_spec = BlankNode(f"{lid}.size")
    quantity = BlankNode(f"{lid}.quantity")

    if batch.volume_range is not None:
        lo_ml = _volume_ml(batch.volume_range[0], batch.unit)
        hi_ml = _volume_ml(batch.volume_range[1], batch.unit)
        nominal = batch.volume_range[1]
    else:
        # Decimal keeps the +-10% bounds free of binary float noise.
        point_ml = Decimal(str(_volume_ml(batch.volume, batch.unit)))
        tolerance = Decimal(str(POINT_VOLUME_TOLERANCE))
        lo_ml = float(point_ml * (1 - tolerance))
        hi_ml = float(point_ml * (1 + tolerance))
        nominal = batch.volume

    triples = [
        Triple(e, RDF.type, restriction),
        Triple(restriction, RDF.type, OWL.Restriction),
        Triple(restriction, OWL.onProperty, EXT.producesItemBatch),
        Triple(restriction, OWL.allValuesFrom, all_values),
        Triple(all_values, OWL.intersectionOf, cell1),
        Triple(cell1, RDF.first, batch_class),
        Triple(cell1, RDF.rest, cell2),
        Triple(cell2, RDF.first, size_restr),
        Triple(cell2, RDF.rest, RDF.nil),
        Triple(batch_class, RDF.type, OWL.Class),
        Triple(batch_class, RDFS.subClassOf, S4INMA.ItemBatch),
        Triple(batch_class, RDFS.label, Literal.string(batch.item_label)),
        Triple(size_restr, RDF.type, OWL.Restriction),
        Triple(size_restr, OWL.onProperty, EXT.hasBatchSize),
        Triple(size_restr, OWL.hasValue, size_spec),
        Triple(size_spec, OM.hasPhenomenon, quantity),
        Triple(quantity, DCTERMS.description, Literal.string(batch.description)),
        Triple(quantity, OM.hasNumericalValue, Literal.double(nominal)),
        Triple(quantity, OM.hasUnit, batch.unit),
        Triple(e, EXT.minItemVolumeMillilitres, Literal.double(lo_ml)),
        Triple(e, EXT.maxItemVolumeMillilitres, Literal.double(hi_ml)),
    ]
    if batch.max_item_width_m is not None:
        triples.append(Triple(e, EXT.maxItemWidthMetres, Literal.double(batch.max_item_width_m)))
    if batch.max_item_height_m is not None:
        triples.append(Triple(e, EXT.maxItemHeightMetres, Literal.double(batch.max_item_height_m)))
    return triples


def build_component_triples(sub: ExtruderSubmission, comp: ComponentSubmission) -> list[Triple]:
    c = INST[f"{sub.local_id}-{comp.local_id}"]
    triples = [
        Triple(sub.iri, EXT.hasComponent, c),
        Triple(c, RDF.type, comp.component_type),
        Triple(c, RDFS.label, Literal.string(comp.label)),
    ]
    if comp.part_code:
        triples.append(Triple(c, EXT.partCode, Literal.string(comp.part_code)))
    for i, feat in enumerate(comp.features):
        q = BlankNode(f"{sub.local_id}.{comp.local_id}.q{i}")
        triples.extend(
            [
                Triple(c, qualifier_property(feat.qualifier), q),
                Triple(q, RDF.type, feat.measure_type),
                Triple(q, OM.hasNumericalValue, Literal.double(feat.value)),
                Triple(q, OM.hasUnit, feat.unit),
            ]
        )
        if feat.description:
            triples.append(Triple(q, DCTERMS.description, Literal.string(feat.description)))
    if comp.cad is not None:
        triples.extend(build_cad_triples(c, comp.cad, verify=False))
    return triples


def build_extruder_triples(sub: ExtruderSubmission) -> list[Triple]:
    e = sub.iri
    triples = [
        Triple(e, RDF.type, EXT.Extruder),
        Triple(e, RDFS.label, Literal.string(sub.name)),
        Triple(e, EXT.manufacturer, Literal.string(sub.manufacturer)),
        Triple(e, DCTERMS.description, Literal.string(sub.description)),
        Triple(e, EXT.visible, Literal.boolean(sub.visible)),
    ]
    if sub.dimensions is not None:
        width, height, length = sub.dimensions
        triples.extend(
            [
                Triple(e, EXT.widthInMetres, Literal.double(width)),
                Triple(e, EXT.heightInMetres, Literal.double(height)),
                Triple(e, EXT.lengthInMetres, Literal.double(length)),
            ]
        )
    if sub.throughput_bph is not None:
        triples.append(Triple(e, EXT.bottlesPerHour, Literal.double(sub.throughput_bph)))
    triples.extend(build_batch_triples(sub))
    for comp in sub.components:
        triples.extend(build_component_triples(sub, comp))
    return triples


def file_sha256(path: Path | str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def build_cad_triples(
    component: IRI, cad: CadModelRef, verify: bool = True
) -> list[Triple]:
    if verify:
        path = Path(cad.file_path)
        if not path.exists():
            raise FileNotFoundError(f"exported model file missing: {path}")
        actual = file_sha256(path)
        if actual != cad.checksum:
            raise ValueError(
                f"checksum mismatch for {path}: expected {cad.checksum}, found {actual}"
            )
    model = IRI(component.value + "-model")
    point = BlankNode(f"{component.local_name}.pos")
    x, y, z = cad.position
    stored = cad.stored_path or Path(cad.file_path).as_posix()
    return [
        Triple(component, EXT.hasModel3D, model),
        Triple(model, EXT.filePath, Literal.string(stored)),
        Triple(model, EXT.fileFormat, Literal.string(cad.format)),
        Triple(model, EXT.checksum, Literal.string(cad.checksum)),
        Triple(model, EXT.sourceDocument, Literal.string(cad.document_id)),
        Triple(model, EXT.sourceElement, Literal.string(cad.element_id)),
        Triple(model, EXT.locatedAt, point),
        Triple(point, EXT.xCoordinate, Literal.double(x)),
        Triple(point, EXT.yCoordinate, Literal.double(y)),
        Triple(point, EXT.zCoordinate, Literal.double(z)),
    ]


# -- store-mutating operations ----------------------------------------------------------


def register_extruder(
    store: TripleStore,
    sub: ExtruderSubmission,
    config: AppConfig | None = None,
    irdi: IrdiMapping | None = None,
) -> IRI:
    ontology = Ontology(store.snapshot(), config)
    errors = validate_submission(sub, ontology)
    if errors:
        raise SubmissionError(errors)
    triples = build_extruder_triples(sub)
    if irdi is not None:
        for comp in sub.components:
            triples.extend(enrich_with_irdi(comp.component_type, irdi, ontology).triples)
    store.insert(triples)
    return sub.iri


def _instance_closure(store: TripleStore, root: IRI) -> tuple[list[Triple], set[Term]]:
    """The root's triples plus everything reachable through owned nodes:
    blank nodes and IRIs under the root's local prefix (components, models,
    the per-extruder batch class)."""
    snapshot = store.snapshot()
    prefix = root.value + "-"

    def owned(term: Term) -> bool:
        if isinstance(term, BlankNode):
            return True
        return isinstance(term, IRI) and (term == root or term.value.startswith(prefix))

    seen: set[Term] = {root}
    frontier: list[Term] = [root]
    triples: list[Triple] = []
    while frontier:
        node = frontier.pop()
        for t in snapshot.match(subject=node):
            triples.append(t)
            if owned(t.object) and t.object not in seen:
                seen.add(t.object)
                frontier.append(t.object)
    return triples, seen


def delete_extruder(store: TripleStore, extruder: IRI) -> list[Triple]:
    """Remove the instance's whole closure; returns dangling references left
    behind (triples elsewhere that still point at deleted nodes)."""
    snapshot = store.snapshot()
    if snapshot.value(extruder, RDF.type) is None:
        raise UnknownExtruderError(extruder.value)
    triples, owned_nodes = _instance_closure(store, extruder)
    removed_set = set(triples)
    store.remove(triples)
    after = store.snapshot()
    dangling = [
        t
        for node in owned_nodes
        for t in after.match(object=node)
        if t not in removed_set
    ]
    return dangling


def annotate_cad(store: TripleStore, component: IRI, cad: CadModelRef) -> int:
    """Attach or refresh a component's 3D model annotation in one batch.

    Unchanged metadata is a no-op; a changed export replaces the old model
    subtree and bumps the revision exactly once.
    """
    snapshot = store.snapshot()
    new = build_cad_triples(component, cad)
    old: list[Triple] = []
    for t in snapshot.match(subject=component, predicate=EXT.hasModel3D):
        old.append(t)
        for mt in snapshot.match(subject=t.object):
            old.append(mt)
            if isinstance(mt.object, BlankNode):
                old.extend(snapshot.match(subject=mt.object))
    # apply() keeps triples that appear on both sides, so an unchanged
    # re-annotation is a no-op without a revision bump.
    return store.apply(add=new, remove=old)


def set_visible(store: TripleStore, extruder: IRI, flag: bool, config: AppConfig | None = None) -> int:
    config = config or AppConfig()
    snapshot = store.snapshot()
    if snapshot.value(extruder, RDF.type) is None:
        raise UnknownExtruderError(extruder.value)
    old = list(snapshot.match(subject=extruder, predicate=config.visible_property))
    new = Triple(extruder, config.visible_property, Literal.boolean(flag))
    return store.apply(add=[new], remove=old)
