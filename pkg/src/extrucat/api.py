"""REST tier: role-gated JSON endpoints over the catalogue, search,
technician and admin services, plus the raw query endpoint.

Auth is bearer-token against a static table from the configuration; roles
nest (admin can do everything a customer can, who can do everything an
anonymous caller can). Errors share one envelope: {code, message, details}.
Requests carrying a disallowed Origin header are rejected, mirroring a
deployment that only accepts its own frontend.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dataclass_field
from typing import Any

from fastapi import Depends, FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import annotate
from .annotate import (
    BatchSpec,
    CadModelRef,
    ComponentSubmission,
    ExtruderSubmission,
    IrdiMapping,
    QuantityFeature,
    SubmissionError,
)
from .cad import (
    AssetStore,
    CadError,
    CadSync,
    CadUnavailable,
    HttpCadClient,
    SyncInProgressError,
    export_model,
)
from .catalogue import (
    AdvancedCondition,
    CatalogueService,
    InfoRequest,
    InvalidInfoRequestError,
    InvalidSearchError,
    SearchParams,
    UnknownExtruderError,
)
from .config import AppConfig
from .fixtures import demo_stock_service
from .ontology import Ontology, UnknownClassError
from .persist import DataDir
from .rdf.store import TripleStore
from .rdf.terms import EXT, OM, BlankNode, IRI, Literal
from .rdf.turtle import TurtleSyntaxError
from .sparql.engine import evaluate
from .sparql.parser import QuerySyntaxError, parse_query
from .sparql.templates import TemplateRegistry
from .stock import HttpStockService, StockError, StockServiceUnavailable
from .technician import OwnershipError, TechnicianService, UnknownComponentError


# -- state ------------------------------------------------------------------


@dataclass
class AppState:
    config: AppConfig
    store: TripleStore
    data_dir: DataDir
    templates: TemplateRegistry
    catalogue: CatalogueService
    technician: TechnicianService
    irdi: IrdiMapping
    assets: AssetStore
    cad_sync: CadSync | None = None
    cad_client: Any = None
    startup_warnings: list[str] = dataclass_field(default_factory=list)


def open_store(config: AppConfig) -> TripleStore:
    """Load the ontology, replay the write-ahead log, then start logging."""
    store = TripleStore()
    store.load_turtle(path=config.ontology_path)
    store.replay_wal(config.wal_path)
    store.wal_path = config.wal_path
    return store


def build_state(config: AppConfig, stock=None, cad_client=None) -> AppState:
    store = open_store(config)
    data_dir = DataDir(config.data_dir)
    templates = TemplateRegistry(config.templates_dir)
    catalogue = CatalogueService(store, templates, data_dir.leads, config)
    if stock is None:
        stock = (
            HttpStockService(config.stock_url) if config.stock_url else demo_stock_service()
        )
    technician = TechnicianService(
        store, catalogue, stock, data_dir.ownership, data_dir.tickets, config
    )
    assets = AssetStore(config.assets_dir)
    warnings = [f"asset checksum mismatch: {p}" for p in assets.verify_all()]
    if cad_client is None and config.cad_url:
        cad_client = HttpCadClient(config.cad_url, config.cad_token)
    cad_sync = (
        CadSync(cad_client, assets, store, data_dir.sync_state) if cad_client else None
    )
    return AppState(
        config=config,
        store=store,
        data_dir=data_dir,
        templates=templates,
        catalogue=catalogue,
        technician=technician,
        irdi=IrdiMapping.load(config.irdi_path),
        assets=assets,
        cad_sync=cad_sync,
        cad_client=cad_client,
        startup_warnings=warnings,
    )


# -- auth ---------------------------------------------------------------------


@dataclass(frozen=True)
class Principal:
    role: str  # anonymous | customer | admin
    user_id: str | None = None
    customer_id: str | None = None


ANONYMOUS = Principal("anonymous")

_ROLE_RANK = {"anonymous": 0, "customer": 1, "admin": 2}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, details: Any = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.details = details


def _envelope(code: str, message: str, details: Any = None) -> dict:
    return {"code": code, "message": message, "details": details}


# -- request bodies ---------------------------------------------------------------


class FeatureBody(BaseModel):
    measure_type: str
    unit: str
    value: float
    qualifier: str = "exact"
    description: str | None = None


class CadRefBody(BaseModel):
    document: str
    element: str
    format: str = "glTF"
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)


class ComponentBody(BaseModel):
    local_id: str
    component_type: str
    label: str
    part_code: str | None = None
    features: list[FeatureBody] = Field(default_factory=list)


class BatchBody(BaseModel):
    item_label: str
    description: str
    volume: float | None = None
    volume_range: tuple[float, float] | None = None
    unit: str = "millilitre"
    max_item_width_m: float | None = None
    max_item_height_m: float | None = None


class DimensionsBody(BaseModel):
    width: float
    height: float
    length: float


class ExtruderBody(BaseModel):
    local_id: str
    name: str
    manufacturer: str
    description: str
    visible: bool = True
    batch: BatchBody | None = None
    dimensions: DimensionsBody | None = None
    throughput_bph: float | None = None
    components: list[ComponentBody] = Field(default_factory=list)


class AdvancedConditionBody(BaseModel):
    component_class: str
    constraints: list[dict] = Field(default_factory=list)


class SearchBody(BaseModel):
    bottle_volume_ml: float | None = None
    bottle_width_m: float | None = None
    bottle_height_m: float | None = None
    bottles_per_day: float | None = None
    hours_per_day: float | None = None
    space_width_m: float | None = None
    space_height_m: float | None = None
    space_length_m: float | None = None
    advanced: list[AdvancedConditionBody] = Field(default_factory=list)


class InfoRequestBody(BaseModel):
    name: str
    email: str
    message: str = ""
    extruder: str
    search_params: SearchBody | None = None


class TicketBody(BaseModel):
    extruder: str
    component: str
    history: list[dict] = Field(default_factory=list)


class SparePartBody(BaseModel):
    component: str
    provider_id: str | None = None


class VisibleBody(BaseModel):
    visible: bool


class CadImportBody(BaseModel):
    component: str
    document: str
    element: str
    format: str = "glTF"
    position: tuple[float, float, float] = (0.0, 0.0, 0.0)


class SparqlBody(BaseModel):
    query: str


# -- IRI resolution helpers ---------------------------------------------------------


def _class_iri(value: str) -> IRI:
    return IRI(value) if "://" in value else EXT[value]


def _om_iri(value: str) -> IRI:
    return IRI(value) if "://" in value else OM[value]


def _instance_iri(value: str) -> IRI:
    from .rdf.terms import INST

    return IRI(value) if "://" in value else INST[value]


def _to_search_params(body: SearchBody) -> SearchParams:
    return SearchParams(
        bottle_volume_ml=body.bottle_volume_ml,
        bottle_width_m=body.bottle_width_m,
        bottle_height_m=body.bottle_height_m,
        bottles_per_day=body.bottles_per_day,
        hours_per_day=body.hours_per_day,
        space_width_m=body.space_width_m,
        space_height_m=body.space_height_m,
        space_length_m=body.space_length_m,
        advanced=[
            AdvancedCondition(
                component_class=_class_iri(cond.component_class),
                constraints=[
                    (_class_iri(c["property"]), str(c["value"]))
                    for c in cond.constraints
                ],
            )
            for cond in body.advanced
        ],
    )


def _to_submission(body: ExtruderBody) -> ExtruderSubmission:
    batch = None
    if body.batch is not None:
        batch = BatchSpec(
            item_label=body.batch.item_label,
            description=body.batch.description,
            volume=body.batch.volume,
            volume_range=body.batch.volume_range,
            unit=_om_iri(body.batch.unit),
            max_item_width_m=body.batch.max_item_width_m,
            max_item_height_m=body.batch.max_item_height_m,
        )
    dimensions = None
    if body.dimensions is not None:
        dimensions = (body.dimensions.width, body.dimensions.height, body.dimensions.length)
    return ExtruderSubmission(
        local_id=body.local_id,
        name=body.name,
        manufacturer=body.manufacturer,
        description=body.description,
        visible=body.visible,
        batch=batch,
        dimensions=dimensions,
        throughput_bph=body.throughput_bph,
        components=[
            ComponentSubmission(
                local_id=c.local_id,
                component_type=_class_iri(c.component_type),
                label=c.label,
                part_code=c.part_code,
                features=[
                    QuantityFeature(
                        measure_type=_om_iri(f.measure_type),
                        unit=_om_iri(f.unit),
                        value=f.value,
                        qualifier=f.qualifier,
                        description=f.description,
                    )
                    for f in c.features
                ],
            )
            for c in body.components
        ],
    )


# -- app factory ----------------------------------------------------------------------


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="extrucat", version="0.1.0")
    config = state.config

    # The browser's 3D view fetches exported meshes straight from here.
    config.assets_dir.mkdir(parents=True, exist_ok=True)
    app.mount("/assets", StaticFiles(directory=config.assets_dir), name="assets")

    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(config.allowed_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.middleware("http")
    async def reject_foreign_origins(request: Request, call_next):
        origin = request.headers.get("origin")
        if origin is not None and origin not in config.allowed_origins:
            return JSONResponse(
                _envelope("origin_forbidden", f"origin {origin!r} is not allowed"),
                status_code=403,
            )
        return await call_next(request)

    # -- error envelope -------------------------------------------------------

    _ERROR_MAP: list[tuple[type, int, str]] = [
        (SubmissionError, 422, "invalid_submission"),
        (InvalidSearchError, 422, "invalid_search"),
        (InvalidInfoRequestError, 422, "invalid_info_request"),
        (UnknownExtruderError, 404, "unknown_extruder"),
        (annotate.UnknownExtruderError, 404, "unknown_extruder"),
        (UnknownComponentError, 404, "unknown_component"),
        (UnknownClassError, 404, "unknown_class"),
        (OwnershipError, 403, "not_owner"),
        (StockServiceUnavailable, 502, "stock_unreachable"),
        (StockError, 409, "stock_error"),
        (SyncInProgressError, 409, "sync_in_progress"),
        (CadUnavailable, 502, "cad_unreachable"),
        (CadError, 502, "cad_error"),
        (QuerySyntaxError, 400, "query_syntax"),
        (TurtleSyntaxError, 400, "turtle_syntax"),
        (ValueError, 422, "invalid_value"),
    ]

    @app.exception_handler(ApiError)
    async def api_error_handler(request: Request, exc: ApiError):
        return JSONResponse(
            _envelope(exc.code, exc.message, exc.details), status_code=exc.status
        )

    @app.exception_handler(Exception)
    async def domain_error_handler(request: Request, exc: Exception):
        for etype, status, code in _ERROR_MAP:
            if isinstance(exc, etype):
                details = getattr(exc, "errors", None)
                return JSONResponse(
                    _envelope(code, str(exc), details), status_code=status
                )
        return JSONResponse(
            _envelope("internal_error", str(exc)), status_code=500
        )

    # -- auth dependencies ------------------------------------------------------

    def principal_of(request: Request) -> Principal:
        header = request.headers.get("authorization", "")
        if not header:
            return ANONYMOUS
        if not header.lower().startswith("bearer "):
            raise ApiError(401, "bad_authorization", "expected a bearer token")
        entry = config.token_entry(header[7:].strip())
        if entry is None:
            raise ApiError(401, "invalid_token", "unknown token")
        return Principal(entry.role, entry.principal, entry.customer_id)

    def require(role: str):
        def dependency(request: Request) -> Principal:
            principal = principal_of(request)
            if _ROLE_RANK[principal.role] < _ROLE_RANK[role]:
                status = 401 if principal.role == "anonymous" else 403
                raise ApiError(
                    status,
                    "forbidden",
                    f"this endpoint requires the {role} role",
                )
            return principal

        return dependency

    # -- anonymous surface ----------------------------------------------------------

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "revision": state.store.revision,
            "triples": len(state.store),
            "warnings": state.startup_warnings,
        }

    @app.get("/api/extruders")
    def list_extruders():
        return {"extruders": [v.to_json() for v in state.catalogue.get_all_extruders()]}

    @app.post("/api/search")
    def search(body: SearchBody):
        params = _to_search_params(body)
        return {
            "params": params.to_json(),
            "extruders": [v.to_json() for v in state.catalogue.search(params)],
        }

    @app.get("/api/search/schema/{cls:path}")
    def search_schema(cls: str):
        ontology = Ontology(state.store.snapshot(), config)
        target = _class_iri(cls)
        schema = ontology.derive_form_schema(target)
        specializations = [
            {"iri": c.value, "label": ontology.label(c)}
            for c in ontology.subclass_closure(target, "down")
            if c != target
        ]
        return {**schema.to_json(), "specializations": specializations}

    @app.get("/api/parttree/{cls:path}")
    def part_tree(cls: str):
        ontology = Ontology(state.store.snapshot(), config)
        tree, warnings = ontology.part_tree(_class_iri(cls))
        return {"tree": tree.to_json(), "warnings": warnings}

    @app.post("/api/info-requests")
    def info_request(body: InfoRequestBody):
        params = _to_search_params(body.search_params) if body.search_params else None
        ticket = state.catalogue.submit_info_request(
            InfoRequest(
                name=body.name,
                email=body.email,
                message=body.message,
                extruder=_instance_iri(body.extruder),
                search_params=params,
            )
        )
        return {"id": ticket}

    # -- customer surface ---------------------------------------------------------------

    @app.get("/api/my/extruders")
    def my_extruders(principal: Principal = Depends(require("customer"))):
        owned = state.technician.list_owned(principal.customer_id)
        return {"extruders": [o.to_json() for o in owned]}

    @app.get("/api/solutions/{component:path}")
    def solutions(component: str, principal: Principal = Depends(require("customer"))):
        entries = state.technician.solutions_for(_instance_iri(component))
        return {"solutions": [e.to_json() for e in entries]}

    @app.post("/api/tickets")
    def open_ticket(body: TicketBody, principal: Principal = Depends(require("customer"))):
        ticket = state.technician.open_ticket(
            principal.customer_id,
            _instance_iri(body.extruder),
            _instance_iri(body.component),
            body.history,
        )
        return ticket.to_json()

    @app.post("/api/spare-parts")
    def spare_parts(body: SparePartBody, principal: Principal = Depends(require("customer"))):
        result = state.technician.request_spare_part(
            _instance_iri(body.component), body.provider_id
        )
        return result.to_json()

    # -- admin surface --------------------------------------------------------------------

    @app.post("/api/admin/extruders", status_code=201)
    def create_extruder(body: ExtruderBody, principal: Principal = Depends(require("admin"))):
        iri = annotate.register_extruder(
            state.store, _to_submission(body), config, state.irdi
        )
        return {"id": iri.value, "revision": state.store.revision}

    @app.patch("/api/admin/extruders/{extruder:path}/visible")
    def patch_visible(
        extruder: str, body: VisibleBody, principal: Principal = Depends(require("admin"))
    ):
        revision = annotate.set_visible(
            state.store, _instance_iri(extruder), body.visible, config
        )
        return {"revision": revision, "visible": body.visible}

    @app.delete("/api/admin/extruders/{extruder:path}")
    def delete_extruder(extruder: str, principal: Principal = Depends(require("admin"))):
        dangling = annotate.delete_extruder(state.store, _instance_iri(extruder))
        return {
            "revision": state.store.revision,
            "dangling_references": [t.n3() for t in dangling],
        }

    @app.get("/api/admin/form-schema/{cls:path}")
    def form_schema(cls: str, principal: Principal = Depends(require("admin"))):
        ontology = Ontology(state.store.snapshot(), config)
        return ontology.derive_form_schema(_class_iri(cls)).to_json()

    @app.get("/api/admin/info-requests")
    def list_info_requests(principal: Principal = Depends(require("admin"))):
        return {"requests": state.data_dir.leads.read_all()}

    @app.get("/api/admin/cad/documents")
    def cad_documents(principal: Principal = Depends(require("admin"))):
        if state.cad_client is None:
            raise ApiError(503, "cad_not_configured", "no CAD platform configured")
        return {"documents": [d.to_json() for d in state.cad_client.list_documents()]}

    @app.post("/api/admin/cad/import")
    def cad_import(body: CadImportBody, principal: Principal = Depends(require("admin"))):
        if state.cad_client is None:
            raise ApiError(503, "cad_not_configured", "no CAD platform configured")
        component = _instance_iri(body.component)
        result = export_model(
            state.cad_client, state.assets, body.document, body.element, body.format
        )
        ref = CadModelRef(
            document_id=body.document,
            element_id=body.element,
            file_path=result.path,
            format=body.format,
            position=body.position,
            checksum=result.checksum,
            stored_path=result.path.relative_to(state.assets.root.parent).as_posix(),
        )
        revision = annotate.annotate_cad(state.store, component, ref)
        state.data_dir.sync_state.put(body.document, body.element, time.time(), result.checksum)
        return {
            "revision": revision,
            "path": ref.stored_path,
            "checksum": result.checksum,
            "cached": result.cached,
            "viewable": result.viewable,
        }

    @app.post("/api/admin/sync")
    def run_sync(principal: Principal = Depends(require("admin"))):
        if state.cad_sync is None:
            raise ApiError(503, "cad_not_configured", "no CAD platform configured")
        report = state.cad_sync.run()
        return report.to_json()

    # -- knowledge platform endpoint --------------------------------------------------------

    @app.post("/sparql")
    def sparql(body: SparqlBody, principal: Principal = Depends(require("admin"))):
        snapshot = state.store.snapshot()
        query = parse_query(body.query)
        solution = evaluate(snapshot, query)
        def term_json(term):
            if isinstance(term, IRI):
                return {"type": "uri", "value": term.value}
            if isinstance(term, BlankNode):
                return {"type": "bnode", "value": term.id}
            out = {"type": "literal", "value": term.lexical}
            if term.language:
                out["xml:lang"] = term.language
            elif isinstance(term, Literal):
                out["datatype"] = term.datatype
            return out

        return {
            "head": {"vars": solution.variables},
            "results": {
                "bindings": [
                    {k: term_json(v) for k, v in row.items()} for row in solution.rows
                ]
            },
        }

    return app
