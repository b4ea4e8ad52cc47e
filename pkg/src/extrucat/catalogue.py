"""Catalogue assembly and guided search.

The catalogue runs the named list query, keeps visible machines, and injects
each machine's components with their quantity properties and 3D models. The
basic search binds the search template with a generated filter fragment, then
advanced conditions are applied in this layer: a machine qualifies when, for
every condition, some component's type falls under the condition class and
carries all required property values.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from decimal import Decimal

from .config import AppConfig, qualifier_for_property
from .ontology import Ontology
from .persist import LeadLog
from .rdf.store import Snapshot, TripleStore
from .rdf.terms import (
    DCTERMS,
    EXT,
    OM,
    RDFS,
    BlankNode,
    IRI,
    Literal,
    Term,
    boolean_value,
)
from .sparql.ast import Row
from .sparql.engine import evaluate
from .sparql.templates import Fragment, TemplateRegistry

EMAIL_RE = re.compile(r"^[^@\s]+@[^@\s]+\.[^@\s]+$")


class UnknownExtruderError(KeyError):
    pass


class InvalidSearchError(ValueError):
    pass


class InvalidInfoRequestError(ValueError):
    pass


# -- view objects ------------------------------------------------------------


@dataclass
class PropertyView:
    label: str
    value: float
    unit: str
    qualifier: str = "exact"
    measure_type: str | None = None
    description: str | None = None

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "value": self.value,
            "unit": self.unit,
            "qualifier": self.qualifier,
            "measure_type": self.measure_type,
            "description": self.description,
        }


@dataclass
class ModelView:
    file_path: str
    format: str
    position: tuple[float, float, float]

    def to_json(self) -> dict:
        return {
            "file_path": self.file_path,
            "format": self.format,
            "position": list(self.position),
        }


@dataclass
class ComponentView:
    id: str
    type_class: str
    type_label: str
    label: str
    properties: list[PropertyView] = field(default_factory=list)
    model: ModelView | None = None

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "type_class": self.type_class,
            "type_label": self.type_label,
            "label": self.label,
            "properties": [p.to_json() for p in self.properties],
            "model": self.model.to_json() if self.model else None,
        }


@dataclass
class ExtruderView:
    id: str
    name: str
    manufacturer: str
    description: str
    production: str
    bottles_per_hour: float | None
    visible: bool
    parts: list[ComponentView] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "manufacturer": self.manufacturer,
            "description": self.description,
            "production": self.production,
            "bottles_per_hour": self.bottles_per_hour,
            "visible": self.visible,
            "parts": [p.to_json() for p in self.parts],
        }


# -- search parameters -----------------------------------------------------------


@dataclass
class AdvancedCondition:
    component_class: IRI
    constraints: list[tuple[IRI, str]] = field(default_factory=list)  # property, value label

    def to_json(self) -> dict:
        return {
            "component_class": self.component_class.value,
            "constraints": [
                {"property": p.value, "value": v} for p, v in self.constraints
            ],
        }


@dataclass
class SearchParams:
    bottle_volume_ml: float | None = None
    bottle_width_m: float | None = None
    bottle_height_m: float | None = None
    bottles_per_day: float | None = None
    hours_per_day: float | None = None
    space_width_m: float | None = None
    space_height_m: float | None = None
    space_length_m: float | None = None
    advanced: list[AdvancedCondition] = field(default_factory=list)

    def validate(self):
        numerics = {
            "bottle_volume_ml": self.bottle_volume_ml,
            "bottle_width_m": self.bottle_width_m,
            "bottle_height_m": self.bottle_height_m,
            "bottles_per_day": self.bottles_per_day,
            "hours_per_day": self.hours_per_day,
            "space_width_m": self.space_width_m,
            "space_height_m": self.space_height_m,
            "space_length_m": self.space_length_m,
        }
        for name, value in numerics.items():
            if value is not None and value <= 0:
                raise InvalidSearchError(f"{name} must be positive")
        if self.hours_per_day is not None and self.hours_per_day > 24:
            raise InvalidSearchError("hours_per_day must be in (0, 24]")
        if self.bottles_per_day is not None and self.hours_per_day is None:
            raise InvalidSearchError(
                "bottles_per_day needs hours_per_day to compute a rate"
            )

    def to_json(self) -> dict:
        return {
            "bottle_volume_ml": self.bottle_volume_ml,
            "bottle_width_m": self.bottle_width_m,
            "bottle_height_m": self.bottle_height_m,
            "bottles_per_day": self.bottles_per_day,
            "hours_per_day": self.hours_per_day,
            "space_width_m": self.space_width_m,
            "space_height_m": self.space_height_m,
            "space_length_m": self.space_length_m,
            "advanced": [c.to_json() for c in self.advanced],
        }


@dataclass
class InfoRequest:
    name: str
    email: str
    message: str
    extruder: IRI
    search_params: SearchParams | None = None


def _numeric(term: Term | None) -> float | None:
    if isinstance(term, Literal) and term.is_numeric:
        return float(term.numeric_value())
    return None


def _string(term: Term | None) -> str:
    return term.lexical if isinstance(term, Literal) else ""


class CatalogueService:
    def __init__(
        self,
        store: TripleStore,
        templates: TemplateRegistry,
        leads: LeadLog,
        config: AppConfig | None = None,
    ):
        self.store = store
        self.templates = templates
        self.leads = leads
        self.config = config or AppConfig()

    # -- Algorithm 1: catalogue assembly ---------------------------------------

    def get_all_extruders(self, include_invisible: bool = False) -> list[ExtruderView]:
        snapshot = self.store.snapshot()
        query = self.templates.bind("allExtrudersList")
        rows = evaluate(snapshot, query).rows
        return self._assemble(snapshot, rows, include_invisible)

    def _assemble(
        self, snapshot: Snapshot, rows: list[Row], include_invisible: bool
    ) -> list[ExtruderView]:
        views = []
        for row in sorted(rows, key=lambda r: r["e"].value):
            visible = boolean_value(row["visible"]) or False
            if not visible and not include_invisible:
                continue  # only visible extruders
            extruder = row["e"]
            view = ExtruderView(
                id=extruder.value,
                name=_string(row.get("name")),
                manufacturer=_string(row.get("manufacturer")),
                description=_string(row.get("description")),
                production=self._production_summary(snapshot, extruder),
                bottles_per_hour=_numeric(snapshot.value(extruder, EXT.bottlesPerHour)),
                visible=visible,
                parts=self.parts_by_id(extruder, snapshot=snapshot),
            )
            views.append(view)
        return views

    def _production_summary(self, snapshot: Snapshot, extruder: IRI) -> str:
        batch_label = ""
        batch_class = IRI(extruder.value + "-batch")
        label = snapshot.value(batch_class, RDFS.label)
        if isinstance(label, Literal):
            batch_label = label.lexical
        bph = _numeric(snapshot.value(extruder, EXT.bottlesPerHour))
        if batch_label and bph:
            return f"{batch_label}, {bph:g} bottles/hour"
        if batch_label:
            return batch_label
        if bph:
            return f"{bph:g} bottles/hour"
        return ""

    def get_extruder(self, extruder: IRI, include_invisible: bool = False) -> ExtruderView:
        for view in self.get_all_extruders(include_invisible=include_invisible):
            if view.id == extruder.value:
                return view
        raise UnknownExtruderError(extruder.value)

    def parts_by_id(
        self, extruder: IRI, snapshot: Snapshot | None = None
    ) -> list[ComponentView]:
        snapshot = snapshot or self.store.snapshot()
        if snapshot.value(extruder, RDFS.label) is None:
            raise UnknownExtruderError(extruder.value)
        ontology = Ontology(snapshot, self.config)
        query = self.templates.bind("partsByExtruderId", {"EXTRUDER": extruder})
        components: dict[str, ComponentView] = {}
        for row in evaluate(snapshot, query).rows:
            part = row["part"]
            type_iri = row["type"]
            if not isinstance(type_iri, IRI) or type_iri not in ontology.known_classes():
                continue
            view = components.get(part.value)
            if view is None:
                view = ComponentView(
                    id=part.value,
                    type_class=type_iri.value,
                    type_label=ontology.label(type_iri),
                    label=_string(row.get("label")),
                )
                components[part.value] = view
            else:
                # Prefer the most specific type when several are asserted.
                if type_iri in ontology.subclass_closure(IRI(view.type_class), "down"):
                    view.type_class = type_iri.value
                    view.type_label = ontology.label(type_iri)
        out = []
        for key in sorted(components):
            view = components[key]
            part = IRI(view.id)
            view.properties = self._properties_by_id(snapshot, ontology, part)
            view.model = self._model_by_id(snapshot, part)
            out.append(view)
        return out

    def _properties_by_id(
        self, snapshot: Snapshot, ontology: Ontology, part: IRI
    ) -> list[PropertyView]:
        query = self.templates.bind("propertiesById", {"COMPONENT": part})
        props = []
        for row in evaluate(snapshot, query).rows:
            measure_type = row["measureType"]
            unit = row["unit"]
            symbol = snapshot.value(unit, OM.symbol)
            description = snapshot.value(row["quantity"], DCTERMS.description)
            props.append(
                PropertyView(
                    label=ontology.label(measure_type),
                    value=_numeric(row["value"]) or 0.0,
                    unit=_string(symbol) or ontology.label(unit),
                    qualifier=qualifier_for_property(row["feature"]) or "exact",
                    measure_type=measure_type.value if isinstance(measure_type, IRI) else None,
                    description=_string(description) or None,
                )
            )
        props.sort(key=lambda p: (p.label, p.qualifier, p.value))
        return props

    def _model_by_id(self, snapshot: Snapshot, part: IRI) -> ModelView | None:
        query = self.templates.bind("modelsById", {"COMPONENT": part})
        for row in evaluate(snapshot, query).rows:
            return ModelView(
                file_path=_string(row["path"]),
                format=_string(row["format"]),
                position=(
                    _numeric(row["x"]) or 0.0,
                    _numeric(row["y"]) or 0.0,
                    _numeric(row["z"]) or 0.0,
                ),
            )
        return None

    # -- Algorithm 2: basic search ------------------------------------------------

    def validate_filters(self, params: SearchParams) -> str:
        """Filter fragment for the search template; unanswered questions
        contribute nothing."""
        params.validate()
        parts: list[str] = []
        if params.bottles_per_day is not None and params.hours_per_day is not None:
            rate = params.bottles_per_day / params.hours_per_day
            parts.append(
                "?e ext:bottlesPerHour ?bph . FILTER(?bph >= %s)" % _fmt(rate)
            )
        if params.bottle_volume_ml is not None:
            parts.append(
                "?e ext:minItemVolumeMillilitres ?volMin . "
                "?e ext:maxItemVolumeMillilitres ?volMax . "
                "FILTER(?volMin <= %s && ?volMax >= %s)"
                % (_fmt(params.bottle_volume_ml), _fmt(params.bottle_volume_ml))
            )
        if params.bottle_width_m is not None:
            parts.append(
                "?e ext:maxItemWidthMetres ?itemW . FILTER(?itemW >= %s)"
                % _fmt(params.bottle_width_m)
            )
        if params.bottle_height_m is not None:
            parts.append(
                "?e ext:maxItemHeightMetres ?itemH . FILTER(?itemH >= %s)"
                % _fmt(params.bottle_height_m)
            )
        if params.space_width_m is not None:
            parts.append(
                "?e ext:widthInMetres ?w . FILTER(?w <= %s)" % _fmt(params.space_width_m)
            )
        if params.space_height_m is not None:
            parts.append(
                "?e ext:heightInMetres ?h . FILTER(?h <= %s)" % _fmt(params.space_height_m)
            )
        if params.space_length_m is not None:
            parts.append(
                "?e ext:lengthInMetres ?l . FILTER(?l <= %s)" % _fmt(params.space_length_m)
            )
        return "\n    ".join(parts)

    def search(self, params: SearchParams) -> list[ExtruderView]:
        fragment = self.validate_filters(params)
        snapshot = self.store.snapshot()
        query = self.templates.bind("BasicSearchQuery", {"FILTERS": Fragment(fragment)})
        rows = evaluate(snapshot, query).rows
        views = self._assemble(snapshot, rows, include_invisible=False)
        if params.advanced:
            ontology = Ontology(snapshot, self.config)
            views = [
                v
                for v in views
                if all(
                    self._condition_holds(snapshot, ontology, v, cond)
                    for cond in params.advanced
                )
            ]
        return views

    def _condition_holds(
        self,
        snapshot: Snapshot,
        ontology: Ontology,
        view: ExtruderView,
        cond: AdvancedCondition,
    ) -> bool:
        try:
            eligible = set(ontology.subclass_closure(cond.component_class, "down"))
        except KeyError:
            raise InvalidSearchError(f"unknown class {cond.component_class.value}")
        for part in view.parts:
            instance = IRI(part.id)
            types = set(ontology.instance_classes(instance))
            if not (types & eligible):
                continue
            if all(
                self._constraint_satisfied(ontology, instance, prop, value)
                for prop, value in cond.constraints
            ):
                return True
        return False

    def _constraint_satisfied(
        self, ontology: Ontology, instance: IRI, prop: IRI, required: str
    ) -> bool:
        for value in ontology.fixed_values_for_instance(instance, prop):
            if isinstance(value, Literal) and value.lexical == required:
                return True
            if isinstance(value, IRI) and (
                value.value == required or ontology.label(value) == required
            ):
                return True
        return False

    # -- information requests ----------------------------------------------------------

    def submit_info_request(self, req: InfoRequest) -> str:
        if not EMAIL_RE.match(req.email):
            raise InvalidInfoRequestError(f"invalid email address {req.email!r}")
        view = self.get_extruder(req.extruder, include_invisible=True)
        origin = "search" if req.search_params is not None else "catalogue"
        return self.leads.record(
            name=req.name,
            email=req.email,
            message=req.message,
            extruder=req.extruder.value,
            extruder_name=view.name,
            origin=origin,
            search_params=req.search_params.to_json() if req.search_params else None,
        )


def _fmt(value: float) -> str:
    # Decimal keeps filter constants exact and readable.
    return format(Decimal(str(value)).normalize(), "f")
