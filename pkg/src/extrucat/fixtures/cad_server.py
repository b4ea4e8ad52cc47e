"""Threaded HTTP stand-in for the cloud CAD platform.

Speaks the export protocol (GET /documents, GET /documents/{id}/elements,
GET /export/{doc}/{elem}?format=...) with bearer-token auth and a
X-Content-Sha256 header on exports. Test hooks live under /_fixture/:
``touch`` bumps an element's modified timestamp and ``corrupt`` makes the
next N exports advertise a wrong checksum.
"""

from __future__ import annotations

import hashlib
import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from ..config import data_path

_FORMAT_EXT = {"glTF": "gltf", "OBJ": "obj", "STL": "stl", "X3D": "x3d"}


@dataclass
class FixtureElement:
    id: str
    name: str
    kind: str = "part"
    modified_at: float = field(default_factory=time.time)
    payloads: dict[str, bytes] = field(default_factory=dict)  # format -> content


@dataclass
class FixtureDocument:
    id: str
    name: str
    modified_at: float = field(default_factory=time.time)
    elements: list[FixtureElement] = field(default_factory=list)

    def element(self, element_id: str) -> FixtureElement | None:
        return next((e for e in self.elements if e.id == element_id), None)


def default_cad_fixture() -> list[FixtureDocument]:
    """Two documents around the bundled cube meshes."""
    cube_gltf = data_path("fixtures", "cube.gltf").read_bytes()
    cube_obj = data_path("fixtures", "cube.obj").read_bytes()
    t = time.time() - 3600
    return [
        FixtureDocument(
            id="doc-ux250",
            name="UX-250 assembly",
            modified_at=t,
            elements=[
                FixtureElement(
                    "elem-hopper", "Feed hopper", modified_at=t,
                    payloads={"glTF": cube_gltf, "OBJ": cube_obj},
                ),
                FixtureElement(
                    "elem-screw", "Screw", modified_at=t,
                    payloads={"glTF": cube_gltf},
                ),
                FixtureElement(
                    "elem-head", "Extrusion head", modified_at=t,
                    payloads={"glTF": cube_gltf},
                ),
            ],
        ),
        FixtureDocument(
            id="doc-ux500",
            name="UX-500 assembly",
            modified_at=t,
            elements=[
                FixtureElement(
                    "elem-motor", "Motor", modified_at=t,
                    payloads={"glTF": cube_gltf, "OBJ": cube_obj},
                ),
                FixtureElement(
                    "elem-fan", "Cooling fan", modified_at=t,
                    payloads={"OBJ": cube_obj},
                ),
            ],
        ),
    ]


class CadFixtureServer:
    def __init__(
        self,
        documents: list[FixtureDocument] | None = None,
        token: str | None = None,
        port: int = 0,
    ):
        self.documents = documents if documents is not None else default_cad_fixture()
        self.token = token
        self.corrupt_next = 0  # exports left to answer with a wrong checksum
        self._httpd = ThreadingHTTPServer(("127.0.0.1", port), self._handler_class())
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address
        return f"http://{host}:{port}"

    def start(self) -> "CadFixtureServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread:
            self._thread.join(timeout=5)

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def document(self, document_id: str) -> FixtureDocument | None:
        return next((d for d in self.documents if d.id == document_id), None)

    def touch(self, document_id: str, element_id: str, at: float | None = None):
        doc = self.document(document_id)
        element = doc.element(element_id) if doc else None
        if element is None:
            raise KeyError(f"{document_id}/{element_id}")
        element.modified_at = at if at is not None else time.time()
        doc.modified_at = max(doc.modified_at, element.modified_at)

    def _handler_class(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # keep test output clean
                pass

            def _send_json(self, payload, status: int = 200):
                body = json.dumps(payload).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def _authorized(self) -> bool:
                if server.token is None:
                    return True
                return self.headers.get("Authorization") == f"Bearer {server.token}"

            def do_GET(self):
                if not self._authorized():
                    self._send_json({"error": "unauthorized"}, 401)
                    return
                url = urlparse(self.path)
                parts = [p for p in url.path.split("/") if p]
                if parts == ["documents"]:
                    self._send_json(
                        [
                            {"id": d.id, "name": d.name, "modified_at": d.modified_at}
                            for d in server.documents
                        ]
                    )
                    return
                if len(parts) == 3 and parts[0] == "documents" and parts[2] == "elements":
                    doc = server.document(parts[1])
                    if doc is None:
                        self._send_json({"error": "no such document"}, 404)
                        return
                    self._send_json(
                        [
                            {
                                "id": e.id,
                                "name": e.name,
                                "kind": e.kind,
                                "modified_at": e.modified_at,
                            }
                            for e in doc.elements
                        ]
                    )
                    return
                if len(parts) == 3 and parts[0] == "export":
                    doc = server.document(parts[1])
                    element = doc.element(parts[2]) if doc else None
                    if element is None:
                        self._send_json({"error": "no such element"}, 404)
                        return
                    fmt = parse_qs(url.query).get("format", ["glTF"])[0]
                    if fmt not in element.payloads:
                        self._send_json({"error": f"format {fmt} not available"}, 415)
                        return
                    content = element.payloads[fmt]
                    checksum = hashlib.sha256(content).hexdigest()
                    if server.corrupt_next > 0:
                        server.corrupt_next -= 1
                        checksum = "0" * 64
                    self.send_response(200)
                    self.send_header("Content-Type", "application/octet-stream")
                    self.send_header("Content-Length", str(len(content)))
                    self.send_header("X-Content-Sha256", checksum)
                    self.end_headers()
                    self.wfile.write(content)
                    return
                self._send_json({"error": "not found"}, 404)

            def do_POST(self):
                url = urlparse(self.path)
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length) or b"{}")
                if url.path == "/_fixture/touch":
                    try:
                        server.touch(body["document"], body["element"], body.get("at"))
                    except KeyError as exc:
                        self._send_json({"error": str(exc)}, 404)
                        return
                    self._send_json({"ok": True})
                    return
                if url.path == "/_fixture/corrupt":
                    server.corrupt_next = int(body.get("count", 1))
                    self._send_json({"ok": True})
                    return
                self._send_json({"error": "not found"}, 404)

        return Handler
