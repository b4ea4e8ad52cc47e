"""Stock and supplier lookups behind the spare-part workflow.

The company's internal parts service is modelled as a small interface with
two implementations: a deterministic in-process table for tests and demos,
and an HTTP client speaking the JSON protocol (GET /stock/{code},
GET /providers?code=|irdi=, POST /orders).
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

import httpx


class StockError(Exception):
    pass


class StockServiceUnavailable(StockError):
    """The parts service cannot be reached; distinct from an empty answer."""


class StockConflict(StockError):
    """Concurrent reservation conflict reported by the remote service; retryable."""


class OutOfStockError(StockError):
    pass


@dataclass(frozen=True)
class StockLevel:
    available: bool
    count: int


@dataclass(frozen=True)
class Provider:
    id: str
    name: str
    count: int
    via_irdi: bool = False
    code: str | None = None  # the part code this provider actually stocks

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "count": self.count,
            "via_irdi": self.via_irdi,
            "code": self.code,
        }


@dataclass(frozen=True)
class OrderReceipt:
    order_id: str
    status: str
    part_code: str
    source: str  # "warehouse" or a provider id

    def to_json(self) -> dict:
        return {
            "order_id": self.order_id,
            "status": self.status,
            "part_code": self.part_code,
            "source": self.source,
        }


class StockService(Protocol):
    def availability(self, code: str) -> StockLevel: ...

    def providers(self, code: str | None = None, irdi: str | None = None) -> list[Provider]: ...

    def place_order(self, code: str, source: str) -> OrderReceipt: ...


@dataclass
class ProviderStock:
    provider_id: str
    name: str
    code: str
    count: int


class InMemoryStockService:
    """Fixture-driven stock tables with atomic check-and-reserve."""

    def __init__(
        self,
        warehouse: dict[str, int] | None = None,
        provider_stock: list[ProviderStock] | None = None,
        code_irdi: dict[str, str] | None = None,
    ):
        self.warehouse = dict(warehouse or {})
        self.provider_stock = list(provider_stock or [])
        self.code_irdi = dict(code_irdi or {})
        self.reservations: list[OrderReceipt] = []
        self._lock = threading.Lock()
        self._seq = 0

    @classmethod
    def from_file(cls, path: Path | str) -> "InMemoryStockService":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            warehouse=data.get("warehouse", {}),
            provider_stock=[ProviderStock(**row) for row in data.get("provider_stock", [])],
            code_irdi=data.get("code_irdi", {}),
        )

    def availability(self, code: str) -> StockLevel:
        count = self.warehouse.get(code, 0)
        return StockLevel(available=count > 0, count=count)

    def providers(self, code: str | None = None, irdi: str | None = None) -> list[Provider]:
        rows: list[ProviderStock]
        if code is not None:
            rows = [r for r in self.provider_stock if r.code == code and r.count > 0]
            via = False
        elif irdi is not None:
            codes = {c for c, i in self.code_irdi.items() if i == irdi}
            rows = [r for r in self.provider_stock if r.code in codes and r.count > 0]
            via = True
        else:
            raise ValueError("either code or irdi is required")
        merged: dict[str, Provider] = {}
        for r in rows:
            existing = merged.get(r.provider_id)
            count = r.count + (existing.count if existing else 0)
            merged[r.provider_id] = Provider(
                r.provider_id, r.name, count, via, existing.code if existing else r.code
            )
        return sorted(merged.values(), key=lambda p: p.id)

    def place_order(self, code: str, source: str) -> OrderReceipt:
        with self._lock:
            if source == "warehouse":
                count = self.warehouse.get(code, 0)
                if count <= 0:
                    raise OutOfStockError(f"warehouse has no stock of {code}")
                self.warehouse[code] = count - 1
                self._seq += 1
                receipt = OrderReceipt(f"WH-{self._seq:04d}", "confirmed", code, "warehouse")
            else:
                row = next(
                    (
                        r
                        for r in self.provider_stock
                        if r.provider_id == source and r.code == code and r.count > 0
                    ),
                    None,
                )
                if row is None:
                    raise OutOfStockError(f"provider {source} has no stock of {code}")
                row.count -= 1
                self._seq += 1
                receipt = OrderReceipt(f"{source}-{self._seq:04d}", "confirmed", code, source)
            self.reservations.append(receipt)
            return receipt


class HttpStockService:
    def __init__(self, base_url: str, timeout: float = 5.0):
        self.base_url = base_url.rstrip("/")
        self._client = httpx.Client(base_url=self.base_url, timeout=timeout)

    def _get(self, path: str, params: dict | None = None) -> dict | list:
        try:
            response = self._client.get(path, params=params)
        except httpx.HTTPError as exc:
            raise StockServiceUnavailable(f"stock service unreachable: {exc}") from exc
        if response.status_code >= 500:
            raise StockServiceUnavailable(f"stock service error {response.status_code}")
        response.raise_for_status()
        return response.json()

    def availability(self, code: str) -> StockLevel:
        data = self._get(f"/stock/{code}")
        return StockLevel(available=bool(data["available"]), count=int(data["count"]))

    def providers(self, code: str | None = None, irdi: str | None = None) -> list[Provider]:
        params = {}
        if code is not None:
            params["code"] = code
        if irdi is not None:
            params["irdi"] = irdi
        data = self._get("/providers", params=params)
        via = code is None and irdi is not None
        return [
            Provider(row["id"], row["name"], int(row["count"]), via, row.get("code"))
            for row in data
        ]

    def place_order(self, code: str, source: str) -> OrderReceipt:
        try:
            response = self._client.post("/orders", json={"code": code, "source": source})
        except httpx.HTTPError as exc:
            raise StockServiceUnavailable(f"stock service unreachable: {exc}") from exc
        if response.status_code == 409:
            raise StockConflict(f"reservation conflict for {code}; retry")
        if response.status_code >= 500:
            raise StockServiceUnavailable(f"stock service error {response.status_code}")
        response.raise_for_status()
        data = response.json()
        return OrderReceipt(data["order_id"], data["status"], code, source)
