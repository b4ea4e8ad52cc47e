"""Threaded HTTP stand-in for the company parts service, wrapping an
in-memory stock table behind the JSON protocol the HTTP client speaks."""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlparse

from ..stock import InMemoryStockService, OutOfStockError, ProviderStock


def demo_stock_service() -> InMemoryStockService:
    """Stock tables matching the demo seed's part codes."""
    return InMemoryStockService(
        warehouse={
            "UR-SCR-010": 3,   # E01 screw: on the shelf
            "UR-HOP-004": 1,   # E01 feed hopper
            "UR-FAN-221": 0,   # E02 cooling fan: exhausted, providers below
            "UR-MTR-180": 0,   # E01 motor: exhausted, no direct providers
        },
        provider_stock=[
            ProviderStock("p-alpha", "Alpine Drives", "UR-FAN-221", 5),
            ProviderStock("p-beta", "Borealis Parts", "UR-FAN-221", 2),
            ProviderStock("p-gamma", "Gallia Motors", "GM-AC-MOTOR-7", 4),
        ],
        code_irdi={
            "UR-MTR-180": "0173-1#01-AKE795#017",
            "GM-AC-MOTOR-7": "0173-1#01-AKE795#017",
            "UR-FAN-221": "0173-1#01-AKF120#009",
        },
    )


class StockFixtureServer:
    def __init__(self, service: InMemoryStockService | None = None, port: int = 0):
        self.service = service or demo_stock_service()
        self._httpd = ThreadingHTTPServer(("127.0.0.1", port), self._handler_class())
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self._httpd.server_address
        return f"http://{host}:{port}"

    def start(self) -> "StockFixtureServer":
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

    def _handler_class(self):
        server = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def _send_json(self, payload, status: int = 200):
                body = json.dumps(payload).encode()
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

            def do_GET(self):
                url = urlparse(self.path)
                parts = [p for p in url.path.split("/") if p]
                if len(parts) == 2 and parts[0] == "stock":
                    level = server.service.availability(parts[1])
                    self._send_json({"available": level.available, "count": level.count})
                    return
                if parts == ["providers"]:
                    params = parse_qs(url.query)
                    code = params.get("code", [None])[0]
                    irdi = params.get("irdi", [None])[0]
                    if code is None and irdi is None:
                        self._send_json({"error": "code or irdi required"}, 400)
                        return
                    providers = server.service.providers(code=code, irdi=irdi)
                    self._send_json(
                        [
                            {"id": p.id, "name": p.name, "count": p.count, "code": p.code}
                            for p in providers
                        ]
                    )
                    return
                self._send_json({"error": "not found"}, 404)

            def do_POST(self):
                url = urlparse(self.path)
                if url.path != "/orders":
                    self._send_json({"error": "not found"}, 404)
                    return
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length) or b"{}")
                try:
                    receipt = server.service.place_order(body["code"], body["source"])
                except OutOfStockError as exc:
                    self._send_json({"error": str(exc)}, 409)
                    return
                self._send_json(
                    {"order_id": receipt.order_id, "status": receipt.status}
                )

        return Handler
