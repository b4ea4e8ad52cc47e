"""Virtual technician: owned machines, component-filtered solution library,
support tickets carrying the action history, and warehouse-first spare-part
ordering with provider alternatives."""

from __future__ import annotations

from dataclasses import dataclass, field

from .catalogue import CatalogueService, ExtruderView
from .config import AppConfig
from .ontology import Ontology
from .persist import OwnershipTable, Ticket, TicketLog
from .rdf.store import TripleStore
from .rdf.terms import EXT, RDF, BlankNode, IRI, Literal, Term
from .stock import Provider, OrderReceipt, StockService


class UnknownComponentError(KeyError):
    pass


class OwnershipError(PermissionError):
    pass


@dataclass
class SolutionEntry:
    id: str
    title: str
    steps: list[str]
    related_to: str

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "steps": list(self.steps),
            "related_to": self.related_to,
        }


@dataclass
class OwnedExtruder:
    acquisition: str  # bought | rented
    view: ExtruderView

    def to_json(self) -> dict:
        return {"acquisition": self.acquisition, **self.view.to_json()}


@dataclass
class SparePartResult:
    """Tagged outcome: exactly one of order or providers is set."""

    tag: str  # "Order" | "Providers"
    order: OrderReceipt | None = None
    providers: list[Provider] = field(default_factory=list)

    def to_json(self) -> dict:
        if self.tag == "Order":
            return {"tag": "Order", "order": self.order.to_json()}
        return {"tag": "Providers", "providers": [p.to_json() for p in self.providers]}


class TechnicianService:
    def __init__(
        self,
        store: TripleStore,
        catalogue: CatalogueService,
        stock: StockService,
        ownership: OwnershipTable,
        tickets: TicketLog,
        config: AppConfig | None = None,
    ):
        self.store = store
        self.catalogue = catalogue
        self.stock = stock
        self.ownership = ownership
        self.tickets = tickets
        self.config = config or AppConfig()

    # -- owned machines ---------------------------------------------------------

    def list_owned(self, customer: str) -> list[OwnedExtruder]:
        """Ownership trumps visibility: a machine hidden from the public
        catalogue still shows up for its owner."""
        out = []
        for row in self.ownership.owned_by(customer):
            view = self.catalogue.get_extruder(IRI(row.extruder), include_invisible=True)
            out.append(OwnedExtruder(acquisition=row.acquisition, view=view))
        return out

    # -- solution library ----------------------------------------------------------

    def _component_class(self, ontology: Ontology, component: IRI) -> IRI:
        classes = ontology.instance_classes(component)
        if not classes:
            raise UnknownComponentError(component.value)
        # Most specific asserted class: one that no other asserted class specializes.
        for cls in classes:
            downs = set(ontology.subclass_closure(cls, "down"))
            if not any(other != cls and other in downs for other in classes):
                return cls
        return classes[0]

    def solutions_for(self, component: IRI) -> list[SolutionEntry]:
        snapshot = self.store.snapshot()
        ontology = Ontology(snapshot, self.config)
        cls = self._component_class(ontology, component)
        entries = []
        for solution in ontology.applicable_solutions(cls):
            title = ontology.label(solution)
            steps = self._steps(snapshot, solution)
            related = snapshot.value(solution, self.config.related_to_property)
            entries.append(
                SolutionEntry(
                    id=solution.local_name,
                    title=title,
                    steps=steps,
                    related_to=related.value if isinstance(related, IRI) else "",
                )
            )
        entries.sort(key=lambda e: e.title)
        return entries

    def _steps(self, snapshot, solution: IRI) -> list[str]:
        head = snapshot.value(solution, EXT.hasStep)
        steps: list[str] = []
        seen: set[Term] = set()
        node = head
        while isinstance(node, (IRI, BlankNode)) and node != RDF.nil and node not in seen:
            seen.add(node)
            first = snapshot.value(node, RDF.first)
            if isinstance(first, Literal):
                steps.append(first.lexical)
            node = snapshot.value(node, RDF.rest)
        return steps

    # -- tickets ------------------------------------------------------------------------

    def open_ticket(
        self, customer: str, extruder: IRI, component: IRI, history: list[dict]
    ) -> Ticket:
        if not self.ownership.owns(customer, extruder.value):
            raise OwnershipError(f"{customer} does not own {extruder.value}")
        return self.tickets.open_ticket(customer, extruder.value, component.value, history)

    # -- spare parts (warehouse first, then providers) --------------------------------------

    def _part_code(self, component: IRI) -> str:
        snapshot = self.store.snapshot()
        if snapshot.value(component, RDF.type) is None:
            raise UnknownComponentError(component.value)
        code = snapshot.value(component, EXT.partCode)
        if isinstance(code, Literal):
            return code.lexical
        return component.local_name

    def _component_irdi(self, component: IRI) -> str | None:
        snapshot = self.store.snapshot()
        ontology = Ontology(snapshot, self.config)
        for cls in ontology.instance_classes(component):
            for candidate in ontology.subclass_closure(cls, "up"):
                code = snapshot.value(candidate, EXT.irdi)
                if isinstance(code, Literal):
                    return code.lexical
        return None

    def get_providers_by_part_id(self, component: IRI) -> list[Provider]:
        """Providers stocking the company part code; when none and the type
        carries an IRDI, broaden to parts classified under the same code."""
        code = self._part_code(component)
        providers = self.stock.providers(code=code)
        if providers:
            return providers
        irdi = self._component_irdi(component)
        if irdi is None:
            return []
        return self.stock.providers(irdi=irdi)

    def request_spare_part(
        self, component: IRI, provider_id: str | None = None
    ) -> SparePartResult:
        code = self._part_code(component)
        # Always check warehouse availability first.
        if self.stock.availability(code).available:
            order = self.stock.place_order(code, "warehouse")
            return SparePartResult("Order", order=order)
        if provider_id is None:
            return SparePartResult(
                "Providers", providers=self.get_providers_by_part_id(component)
            )
        providers = self.get_providers_by_part_id(component)
        match = next((p for p in providers if p.id == provider_id), None)
        if match is not None:
            # IRDI-broadened providers stock an equivalent part under their own code.
            order = self.stock.place_order(match.code or code, provider_id)
            return SparePartResult("Order", order=order)
        return SparePartResult("Providers", providers=providers)
