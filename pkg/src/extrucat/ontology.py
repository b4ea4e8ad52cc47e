"""OWL-aware traversals over a store snapshot: class hierarchy, parthood
tree, restriction extraction, measure-type/unit lookup and the dynamic form
schema that drives both the admin component form and the advanced search.

All reads happen against one immutable snapshot, so every method is a pure
function of it; instances cache by (snapshot identity is enough because
snapshots never mutate).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .config import AppConfig
from .rdf.store import Snapshot
from .rdf.terms import OM, OWL, RDF, RDFS, BlankNode, IRI, Literal, Term


class UnknownClassError(KeyError):
    def __init__(self, iri: IRI):
        super().__init__(f"unknown class {iri.value}")
        self.iri = iri


@dataclass(frozen=True)
class RestrictionInfo:
    on_class: IRI
    property: IRI
    kind: str  # allValuesFrom | hasValue | someValuesFrom
    filler: Term
    via_intersection: bool = False


@dataclass
class UnitInfo:
    iri: IRI
    label: str
    symbol: str

    def to_json(self) -> dict:
        return {"iri": self.iri.value, "label": self.label, "symbol": self.symbol}


@dataclass
class MeasureTypeInfo:
    iri: IRI
    label: str
    units: list[UnitInfo]

    def to_json(self) -> dict:
        return {
            "iri": self.iri.value,
            "label": self.label,
            "units": [u.to_json() for u in self.units],
        }


@dataclass
class PropertyValue:
    iri: IRI | None
    label: str

    def to_json(self) -> dict:
        return {"iri": self.iri.value if self.iri else None, "label": self.label}


@dataclass
class FixedProperty:
    property: IRI
    label: str
    value: PropertyValue

    def to_json(self) -> dict:
        return {"property": self.property.value, "label": self.label, "value": self.value.to_json()}


@dataclass
class RefinementProperty:
    property: IRI
    label: str
    candidates: list[PropertyValue]

    def to_json(self) -> dict:
        return {
            "property": self.property.value,
            "label": self.label,
            "candidates": [c.to_json() for c in self.candidates],
        }


BASIC_FIELDS = ("name", "manufacturer", "description")


@dataclass
class FormSchema:
    component_class: IRI
    label: str
    basic_fields: tuple[str, ...]
    measure_types: list[MeasureTypeInfo]
    fixed_properties: list[FixedProperty]
    refinement_properties: list[RefinementProperty]

    def allowed_units(self, measure_type: IRI) -> set[str]:
        for mt in self.measure_types:
            if mt.iri == measure_type:
                return {u.iri.value for u in mt.units}
        return set()

    def to_json(self) -> dict:
        return {
            "component_class": self.component_class.value,
            "label": self.label,
            "basic_fields": list(self.basic_fields),
            "measure_types": [m.to_json() for m in self.measure_types],
            "fixed_properties": [f.to_json() for f in self.fixed_properties],
            "refinement_properties": [r.to_json() for r in self.refinement_properties],
        }


@dataclass
class PartTree:
    iri: IRI
    label: str
    children: list["PartTree"] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "iri": self.iri.value,
            "label": self.label,
            "children": [c.to_json() for c in self.children],
        }

    def flatten(self) -> list[IRI]:
        out = [self.iri]
        for child in self.children:
            out.extend(child.flatten())
        return out


class Ontology:
    def __init__(self, snapshot: Snapshot, config: AppConfig | None = None):
        self.snapshot = snapshot
        self.config = config or AppConfig()
        self._known_classes: set[IRI] | None = None
        self._closure_cache: dict[tuple[IRI, str], list[IRI]] = {}

    # -- basics ----------------------------------------------------------

    def label(self, term: Term) -> str:
        """rdfs:label, preferring English, falling back to the local name."""
        if isinstance(term, Literal):
            return term.lexical
        candidates = [
            o
            for o in self.snapshot.objects(term, RDFS.label)
            if isinstance(o, Literal)
        ]
        for lit in candidates:
            if lit.language == "en":
                return lit.lexical
        if candidates:
            return sorted(candidates, key=lambda l: l.lexical)[0].lexical
        if isinstance(term, IRI):
            return term.local_name
        return term.id

    def known_classes(self) -> set[IRI]:
        if self._known_classes is None:
            out: set[IRI] = set()
            for t in self.snapshot.match(predicate=RDF.type, object=OWL.Class):
                if isinstance(t.subject, IRI):
                    out.add(t.subject)
            for t in self.snapshot.match(predicate=RDFS.subClassOf):
                if isinstance(t.subject, IRI):
                    out.add(t.subject)
                if isinstance(t.object, IRI):
                    out.add(t.object)
            self._known_classes = out
        return self._known_classes

    def require_class(self, iri: IRI):
        if iri not in self.known_classes():
            raise UnknownClassError(iri)

    def direct_superclasses(self, iri: IRI) -> list[IRI]:
        return sorted(
            {
                o
                for o in self.snapshot.objects(iri, RDFS.subClassOf)
                if isinstance(o, IRI)
            },
            key=lambda c: c.value,
        )

    def direct_subclasses(self, iri: IRI) -> list[IRI]:
        return sorted(
            {
                s
                for s in self.snapshot.subjects(RDFS.subClassOf, iri)
                if isinstance(s, IRI)
            },
            key=lambda c: c.value,
        )

    def subclass_closure(self, iri: IRI, direction: str = "down") -> list[IRI]:
        """Reflexive-transitive closure over asserted subclass edges, BFS
        order with ties broken by IRI."""
        if direction not in ("up", "down"):
            raise ValueError("direction must be 'up' or 'down'")
        key = (iri, direction)
        if key in self._closure_cache:
            return list(self._closure_cache[key])
        self.require_class(iri)
        step = self.direct_subclasses if direction == "down" else self.direct_superclasses
        seen = [iri]
        seen_set = {iri}
        frontier = [iri]
        while frontier:
            nxt = []
            for cls in frontier:
                for neighbour in step(cls):
                    if neighbour not in seen_set:
                        seen_set.add(neighbour)
                        nxt.append(neighbour)
            nxt.sort(key=lambda c: c.value)
            seen.extend(nxt)
            frontier = nxt
        self._closure_cache[key] = seen
        return list(seen)

    # -- restrictions -------------------------------------------------------

    def _extract_restriction(
        self, on_class: IRI, node: Term, via_intersection: bool
    ) -> RestrictionInfo | None:
        prop = self.snapshot.value(node, OWL.onProperty)
        if not isinstance(prop, IRI):
            return None
        for kind, pred in (
            ("allValuesFrom", OWL.allValuesFrom),
            ("someValuesFrom", OWL.someValuesFrom),
            ("hasValue", OWL.hasValue),
        ):
            filler = self.snapshot.value(node, pred)
            if filler is not None:
                return RestrictionInfo(on_class, prop, kind, filler, via_intersection)
        return None

    def _list_members(self, head: Term) -> list[Term]:
        out: list[Term] = []
        node = head
        seen = set()
        while isinstance(node, (IRI, BlankNode)) and node != RDF.nil:
            if node in seen:
                break  # malformed cyclic list
            seen.add(node)
            first = self.snapshot.value(node, RDF.first)
            if first is not None:
                out.append(first)
            node = self.snapshot.value(node, RDF.rest)
        return out

    def restrictions_on(
        self, iri: IRI, include_inherited: bool = True
    ) -> list[RestrictionInfo]:
        """Restrictions reachable from a class via rdfs:subClassOf, directly
        or through one level of owl:intersectionOf membership."""
        classes = self.subclass_closure(iri, "up") if include_inherited else [iri]
        out: list[RestrictionInfo] = []
        for cls in classes:
            for parent in self.snapshot.objects(cls, RDFS.subClassOf):
                if isinstance(parent, IRI):
                    continue
                if self._is_restriction(parent):
                    info = self._extract_restriction(cls, parent, False)
                    if info:
                        out.append(info)
                    continue
                intersection = self.snapshot.value(parent, OWL.intersectionOf)
                if intersection is None:
                    continue
                for member in self._list_members(intersection):
                    if isinstance(member, IRI):
                        continue
                    if self._is_restriction(member):
                        info = self._extract_restriction(cls, member, True)
                        if info:
                            out.append(info)
                    elif self.snapshot.value(member, OWL.intersectionOf) is not None:
                        # One nesting level is supported; deeper shapes are flagged.
                        raise ValueError(
                            f"nested owl:intersectionOf under {cls.value} is not supported"
                        )
        return out

    def _is_restriction(self, node: Term) -> bool:
        return OWL.Restriction in self.snapshot.objects(node, RDF.type) or (
            self.snapshot.value(node, OWL.onProperty) is not None
        )

    # -- part tree ------------------------------------------------------------

    def part_tree(self, root: IRI) -> tuple[PartTree, list[str]]:
        self.require_class(root)
        warnings: list[str] = []
        parthood = set(self.config.parthood_properties)

        def children_of(cls: IRI) -> list[IRI]:
            fillers = {
                r.filler
                for r in self.restrictions_on(cls)
                if r.property in parthood
                and r.kind in ("someValuesFrom", "allValuesFrom")
                and isinstance(r.filler, IRI)
            }
            return sorted(fillers, key=lambda c: c.value)

        def build(cls: IRI, ancestors: frozenset[IRI]) -> PartTree:
            node = PartTree(cls, self.label(cls))
            for child in children_of(cls):
                if child in ancestors:
                    warnings.append(
                        f"parthood cycle: {child.value} already on path under {cls.value}"
                    )
                    continue
                node.children.append(build(child, ancestors | {child}))
            return node

        return build(root, frozenset({root})), warnings

    # -- measure types and units ---------------------------------------------------

    def units_for_measure_type(self, measure_type: IRI) -> list[UnitInfo]:
        units: list[UnitInfo] = []
        for r in self.restrictions_on(measure_type):
            if r.property == OM.hasUnit and r.kind == "allValuesFrom" and isinstance(r.filler, IRI):
                for t in self.snapshot.match(predicate=RDF.type, object=r.filler):
                    if not isinstance(t.subject, IRI):
                        continue
                    symbol = self.snapshot.value(t.subject, OM.symbol)
                    units.append(
                        UnitInfo(
                            t.subject,
                            self.label(t.subject),
                            symbol.lexical if isinstance(symbol, Literal) else "",
                        )
                    )
        units.sort(key=lambda u: u.label)
        return units

    def measure_types_for(self, component_class: IRI) -> list[MeasureTypeInfo]:
        feature_props = set(self.config.feature_properties)
        fillers = {
            r.filler
            for r in self.restrictions_on(component_class)
            if r.property in feature_props
            and r.kind in ("someValuesFrom", "allValuesFrom")
            and isinstance(r.filler, IRI)
        }
        out = [
            MeasureTypeInfo(f, self.label(f), self.units_for_measure_type(f))
            for f in fillers
        ]
        out.sort(key=lambda m: m.label)
        return out

    # -- form schema ---------------------------------------------------------------

    def _property_value(self, term: Term) -> PropertyValue:
        if isinstance(term, Literal):
            return PropertyValue(None, term.lexical)
        if isinstance(term, IRI):
            return PropertyValue(term, self.label(term))
        return PropertyValue(None, term.id)

    def derive_form_schema(self, component_class: IRI) -> FormSchema:
        self.require_class(component_class)
        skip_props = (
            set(self.config.feature_properties)
            | set(self.config.parthood_properties)
            | {OM.hasUnit}
        )

        fixed: list[FixedProperty] = []
        seen_fixed: set[tuple[IRI, str]] = set()
        for r in self.restrictions_on(component_class):
            # someValuesFrom surfaces like allValuesFrom: forms only need the
            # candidate value, not the exact OWL quantifier.
            if r.property in skip_props:
                continue
            value = self._property_value(r.filler)
            key = (r.property, value.label)
            if key in seen_fixed:
                continue
            seen_fixed.add(key)
            fixed.append(FixedProperty(r.property, self.label(r.property), value))
        fixed.sort(key=lambda f: f.label)

        refinements: dict[IRI, RefinementProperty] = {}
        for subclass in self.subclass_closure(component_class, "down"):
            if subclass == component_class:
                continue
            for r in self.restrictions_on(subclass, include_inherited=False):
                if r.kind != "hasValue" or r.property in skip_props:
                    continue
                entry = refinements.setdefault(
                    r.property,
                    RefinementProperty(r.property, self.label(r.property), []),
                )
                value = self._property_value(r.filler)
                if value.label not in [c.label for c in entry.candidates]:
                    entry.candidates.append(value)
        for entry in refinements.values():
            entry.candidates.sort(key=lambda c: c.label)

        return FormSchema(
            component_class=component_class,
            label=self.label(component_class),
            basic_fields=BASIC_FIELDS,
            measure_types=self.measure_types_for(component_class),
            fixed_properties=fixed,
            refinement_properties=sorted(refinements.values(), key=lambda r: r.label),
        )

    # -- solutions --------------------------------------------------------------------

    def applicable_solutions(self, component_class: IRI) -> list[IRI]:
        """Solutions related to the class or any of its superclasses."""
        self.require_class(component_class)
        related = self.config.related_to_property
        targets = set(self.subclass_closure(component_class, "up"))
        out = {
            t.subject
            for target in targets
            for t in self.snapshot.match(predicate=related, object=target)
            if isinstance(t.subject, IRI)
        }
        return sorted(out, key=lambda s: s.value)

    # -- instance helpers ----------------------------------------------------------------

    def instance_classes(self, instance: Term) -> list[IRI]:
        return sorted(
            {
                o
                for o in self.snapshot.objects(instance, RDF.type)
                if isinstance(o, IRI) and o in self.known_classes()
            },
            key=lambda c: c.value,
        )

    def fixed_values_for_instance(self, instance: Term, prop: IRI) -> set[Term]:
        """Values a component instance carries for a property, asserted
        directly or inherited as hasValue restrictions of its classes."""
        values = set(self.snapshot.objects(instance, prop))
        for cls in self.instance_classes(instance):
            for r in self.restrictions_on(cls):
                if r.property == prop and r.kind == "hasValue":
                    values.add(r.filler)
        return values
