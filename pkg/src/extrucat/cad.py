"""CAD platform client, model export with checksum caching, and sync.

Exports land under ``assets/{doc}/{elem}.{ext}`` next to a ``.sha256``
sidecar; files are written atomically (temp file + rename) and re-exports of
unchanged content are no-ops. Three sync strategies exist: manual runs,
fixed-interval scheduling, and staleness-triggered refresh when a model is
viewed. Only one sync runs at a time.
"""

from __future__ import annotations

import hashlib
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

import httpx

from .annotate import CadModelRef, annotate_cad
from .rdf.store import TripleStore
from .rdf.terms import EXT, IRI, Literal
from .persist import SyncStateFile

VIEWABLE_FORMATS = ("glTF",)
SUPPORTED_FORMATS = ("glTF", "OBJ", "STL", "X3D")

_FORMAT_EXT = {"glTF": "gltf", "OBJ": "obj", "STL": "stl", "X3D": "x3d"}


class CadError(Exception):
    pass


class CadAuthError(CadError):
    pass


class CadUnavailable(CadError):
    pass


class UnsupportedFormatError(CadError):
    pass


class ChecksumMismatchError(CadError):
    pass


class SyncInProgressError(CadError):
    pass


@dataclass(frozen=True)
class CadElement:
    id: str
    name: str
    kind: str
    modified_at: float


@dataclass(frozen=True)
class CadDocument:
    id: str
    name: str
    modified_at: float
    elements: tuple[CadElement, ...] = ()

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "modified_at": self.modified_at,
            "elements": [
                {"id": e.id, "name": e.name, "kind": e.kind, "modified_at": e.modified_at}
                for e in self.elements
            ],
        }


@dataclass(frozen=True)
class ExportPayload:
    content: bytes
    checksum: str | None  # checksum advertised by the platform, if any


class CadClient(Protocol):
    def list_documents(self) -> list[CadDocument]: ...

    def export(self, document_id: str, element_id: str, format: str) -> ExportPayload: ...


class HttpCadClient:
    def __init__(self, base_url: str, token: str | None = None, timeout: float = 10.0):
        self.base_url = base_url.rstrip("/")
        self.token = token
        headers = {"Authorization": f"Bearer {token}"} if token else {}
        self._client = httpx.Client(base_url=self.base_url, headers=headers, timeout=timeout)

    def _request(self, path: str, params: dict | None = None) -> httpx.Response:
        try:
            response = self._client.get(path, params=params)
        except httpx.HTTPError as exc:
            raise CadUnavailable(f"CAD platform unreachable: {exc}") from exc
        if response.status_code in (401, 403):
            raise CadAuthError(f"CAD platform rejected credentials ({response.status_code})")
        if response.status_code == 415:
            raise UnsupportedFormatError(response.text)
        if response.status_code >= 400:
            raise CadError(f"CAD platform error {response.status_code}: {response.text}")
        return response

    def list_documents(self) -> list[CadDocument]:
        docs = []
        for row in self._request("/documents").json():
            elements = tuple(
                CadElement(e["id"], e["name"], e.get("kind", "part"), float(e["modified_at"]))
                for e in self._request(f"/documents/{row['id']}/elements").json()
            )
            docs.append(
                CadDocument(row["id"], row["name"], float(row["modified_at"]), elements)
            )
        return docs

    def export(self, document_id: str, element_id: str, format: str) -> ExportPayload:
        if format not in SUPPORTED_FORMATS:
            raise UnsupportedFormatError(f"format {format!r} not supported")
        response = self._request(
            f"/export/{document_id}/{element_id}", params={"format": format}
        )
        return ExportPayload(response.content, response.headers.get("X-Content-Sha256"))


# -- local asset storage -----------------------------------------------------------


def sha256_bytes(content: bytes) -> str:
    return hashlib.sha256(content).hexdigest()


class AssetStore:
    def __init__(self, root: Path | str):
        self.root = Path(root)

    def path_for(self, document_id: str, element_id: str, format: str) -> Path:
        return self.root / document_id / f"{element_id}.{_FORMAT_EXT[format]}"

    def write(self, path: Path, content: bytes) -> str:
        path.parent.mkdir(parents=True, exist_ok=True)
        checksum = sha256_bytes(content)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_bytes(content)
        tmp.replace(path)
        path.with_suffix(path.suffix + ".sha256").write_text(checksum, encoding="utf-8")
        return checksum

    def recorded_checksum(self, path: Path) -> str | None:
        sidecar = path.with_suffix(path.suffix + ".sha256")
        if sidecar.exists():
            return sidecar.read_text(encoding="utf-8").strip()
        return None

    def verify(self, path: Path) -> bool:
        recorded = self.recorded_checksum(path)
        if recorded is None or not path.exists():
            return False
        return sha256_bytes(path.read_bytes()) == recorded

    def verify_all(self) -> list[str]:
        """Paths whose content no longer matches their sidecar."""
        bad = []
        for sidecar in self.root.rglob("*.sha256"):
            asset = sidecar.with_suffix("")
            if not asset.exists() or sha256_bytes(asset.read_bytes()) != sidecar.read_text(
                encoding="utf-8"
            ).strip():
                bad.append(str(asset))
        return sorted(bad)


@dataclass(frozen=True)
class ExportResult:
    path: Path
    checksum: str
    cached: bool
    viewable: bool


def export_model(
    client: CadClient,
    assets: AssetStore,
    document_id: str,
    element_id: str,
    format: str = "glTF",
) -> ExportResult:
    """Download one element; atomic write, checksum sidecar, retry-once on a
    corrupt transfer, no-op when content is unchanged."""
    if format not in SUPPORTED_FORMATS:
        raise UnsupportedFormatError(f"format {format!r} not supported")
    payload = client.export(document_id, element_id, format)
    if payload.checksum is not None and sha256_bytes(payload.content) != payload.checksum:
        payload = client.export(document_id, element_id, format)  # single retry
        if payload.checksum is not None and sha256_bytes(payload.content) != payload.checksum:
            raise ChecksumMismatchError(
                f"download of {document_id}/{element_id} corrupted twice"
            )
    checksum = sha256_bytes(payload.content)
    path = assets.path_for(document_id, element_id, format)
    if assets.recorded_checksum(path) == checksum and path.exists():
        return ExportResult(path, checksum, cached=True, viewable=format in VIEWABLE_FORMATS)
    assets.write(path, payload.content)
    return ExportResult(path, checksum, cached=False, viewable=format in VIEWABLE_FORMATS)


# -- synchronization -------------------------------------------------------------------


@dataclass
class SyncPolicy:
    mode: str = "manual"  # manual | scheduled | on-view
    interval_s: float | None = None
    staleness_s: float = 300.0

    def __post_init__(self):
        if self.mode not in ("manual", "scheduled", "on-view"):
            raise ValueError(f"unknown sync mode {self.mode!r}")
        if self.mode == "scheduled":
            if not self.interval_s or self.interval_s <= 0:
                raise ValueError("scheduled sync needs a positive interval")


@dataclass
class SyncReport:
    updated: list[str] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)
    failed: list[tuple[str, str]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "updated": list(self.updated),
            "skipped": list(self.skipped),
            "failed": [{"element": k, "error": e} for k, e in self.failed],
        }


@dataclass(frozen=True)
class TrackedModel:
    component: IRI
    document_id: str
    element_id: str
    format: str
    position: tuple[float, float, float]


def tracked_models(store: TripleStore) -> list[TrackedModel]:
    """Every component model annotated in the store, from its triples."""
    snapshot = store.snapshot()
    out = []
    for t in snapshot.match(predicate=EXT.hasModel3D):
        model = t.object
        doc = snapshot.value(model, EXT.sourceDocument)
        elem = snapshot.value(model, EXT.sourceElement)
        fmt = snapshot.value(model, EXT.fileFormat)
        if not (isinstance(doc, Literal) and isinstance(elem, Literal)):
            continue
        point = snapshot.value(model, EXT.locatedAt)
        coords = (0.0, 0.0, 0.0)
        if point is not None:
            def num(pred):
                v = snapshot.value(point, pred)
                return float(v.numeric_value()) if isinstance(v, Literal) and v.is_numeric else 0.0

            coords = (num(EXT.xCoordinate), num(EXT.yCoordinate), num(EXT.zCoordinate))
        out.append(
            TrackedModel(
                component=t.subject,
                document_id=doc.lexical,
                element_id=elem.lexical,
                format=fmt.lexical if isinstance(fmt, Literal) else "glTF",
                position=coords,
            )
        )
    out.sort(key=lambda m: (m.document_id, m.element_id))
    return out


class CadSync:
    def __init__(
        self,
        client: CadClient,
        assets: AssetStore,
        store: TripleStore,
        state: SyncStateFile,
        policy: SyncPolicy | None = None,
    ):
        self.client = client
        self.assets = assets
        self.store = store
        self.state = state
        self.policy = policy or SyncPolicy()
        self._running = threading.Lock()

    def run(self) -> SyncReport:
        """One pass: re-export and re-annotate every tracked element whose
        platform timestamp passed its last sync. Failures are per element."""
        if not self._running.acquire(blocking=False):
            raise SyncInProgressError("sync in progress")
        try:
            return self._run_locked()
        finally:
            self._running.release()

    def _run_locked(self) -> SyncReport:
        report = SyncReport()
        tracked = tracked_models(self.store)
        try:
            documents = {d.id: d for d in self.client.list_documents()}
        except CadError as exc:
            report.failed = [
                (SyncStateFile.key(m.document_id, m.element_id), str(exc)) for m in tracked
            ]
            return report
        for model in tracked:
            key = SyncStateFile.key(model.document_id, model.element_id)
            try:
                doc = documents.get(model.document_id)
                element = (
                    next((e for e in doc.elements if e.id == model.element_id), None)
                    if doc
                    else None
                )
                if element is None:
                    report.failed.append((key, "element missing on platform"))
                    continue
                last = self.state.get(model.document_id, model.element_id)
                if last is not None and element.modified_at <= last["last_sync"]:
                    report.skipped.append(key)
                    continue
                self._refresh(model)
                report.updated.append(key)
            except CadError as exc:
                report.failed.append((key, str(exc)))
        return report

    def _refresh(self, model: TrackedModel):
        result = export_model(
            self.client, self.assets, model.document_id, model.element_id, model.format
        )
        ref = CadModelRef(
            document_id=model.document_id,
            element_id=model.element_id,
            file_path=result.path,
            format=model.format,
            position=model.position,
            checksum=result.checksum,
            stored_path=result.path.relative_to(self.assets.root.parent).as_posix(),
        )
        annotate_cad(self.store, model.component, ref)
        self.state.put(model.document_id, model.element_id, time.time(), result.checksum)

    # -- strategy helpers -------------------------------------------------------

    def due(self, now: float | None = None) -> bool:
        """Whether a scheduled sync should run now."""
        if self.policy.mode != "scheduled":
            return False
        now = time.time() if now is None else now
        state = self.state.load()
        if not state:
            return True
        newest = max(v["last_sync"] for v in state.values())
        return now - newest >= self.policy.interval_s

    def on_view(self, document_id: str, element_id: str) -> SyncReport | None:
        """Refresh a single viewed element when its sync is stale."""
        if self.policy.mode != "on-view":
            return None
        last = self.state.get(document_id, element_id)
        if last is not None and time.time() - last["last_sync"] < self.policy.staleness_s:
            return None
        if not self._running.acquire(blocking=False):
            raise SyncInProgressError("sync in progress")
        try:
            report = SyncReport()
            for model in tracked_models(self.store):
                if model.document_id == document_id and model.element_id == element_id:
                    try:
                        self._refresh(model)
                        report.updated.append(SyncStateFile.key(document_id, element_id))
                    except CadError as exc:
                        report.failed.append(
                            (SyncStateFile.key(document_id, element_id), str(exc))
                        )
            return report
        finally:
            self._running.release()
