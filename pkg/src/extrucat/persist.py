"""File-backed persistence for everything that lives outside the triple
store: sales leads, support tickets, machine ownership and CAD sync state.

Leads and ticket events are append-only JSON lines; appends are serialized
per file so the log is a byte-prefix of every later state.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any


class JsonlLog:
    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._lock = threading.Lock()

    def append(self, record: dict[str, Any]):
        line = json.dumps(record, sort_keys=True, ensure_ascii=False)
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")

    def read_all(self) -> list[dict[str, Any]]:
        if not self.path.exists():
            return []
        out = []
        with open(self.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    out.append(json.loads(line))
        return out

    def __len__(self) -> int:
        return len(self.read_all())


class LeadLog(JsonlLog):
    """Information-request records from the catalogue and search results."""

    def next_id(self) -> str:
        return f"lead-{len(self) + 1:06d}"

    def record(
        self,
        name: str,
        email: str,
        message: str,
        extruder: str,
        extruder_name: str,
        origin: str,
        search_params: dict | None = None,
    ) -> str:
        lead_id = self.next_id()
        self.append(
            {
                "id": lead_id,
                "created": time.time(),
                "name": name,
                "email": email,
                "message": message,
                "extruder": extruder,
                "extruder_name": extruder_name,
                "origin": origin,
                "search_params": search_params,
            }
        )
        return lead_id


@dataclass
class Ticket:
    id: str
    customer: str
    extruder: str
    component: str
    status: str = "open"
    history: list[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "customer": self.customer,
            "extruder": self.extruder,
            "component": self.component,
            "status": self.status,
            "history": list(self.history),
        }


class TicketLog(JsonlLog):
    """Event-sourced tickets: one JSON line per event, state by folding."""

    def open_ticket(
        self, customer: str, extruder: str, component: str, history: list[dict]
    ) -> Ticket:
        ticket_id = f"ticket-{sum(1 for r in self.read_all() if r['event'] == 'opened') + 1:06d}"
        self.append(
            {
                "event": "opened",
                "ticket": ticket_id,
                "at": time.time(),
                "customer": customer,
                "extruder": extruder,
                "component": component,
                "history": history,
            }
        )
        return self.load(ticket_id)

    def append_action(self, ticket_id: str, action: str, detail: str):
        if self.load(ticket_id) is None:
            raise KeyError(f"unknown ticket {ticket_id}")
        self.append(
            {
                "event": "action",
                "ticket": ticket_id,
                "at": time.time(),
                "action": action,
                "detail": detail,
            }
        )

    def close(self, ticket_id: str):
        if self.load(ticket_id) is None:
            raise KeyError(f"unknown ticket {ticket_id}")
        self.append({"event": "closed", "ticket": ticket_id, "at": time.time()})

    def load(self, ticket_id: str) -> Ticket | None:
        ticket = None
        for record in self.read_all():
            if record["ticket"] != ticket_id:
                continue
            if record["event"] == "opened":
                ticket = Ticket(
                    ticket_id,
                    record["customer"],
                    record["extruder"],
                    record["component"],
                    history=list(record["history"]),
                )
            elif record["event"] == "action" and ticket is not None:
                ticket.history.append(
                    {"at": record["at"], "action": record["action"], "detail": record["detail"]}
                )
            elif record["event"] == "closed" and ticket is not None:
                ticket.status = "closed"
        return ticket

    def all_tickets(self) -> list[Ticket]:
        ids: list[str] = []
        for record in self.read_all():
            if record["event"] == "opened" and record["ticket"] not in ids:
                ids.append(record["ticket"])
        return [self.load(t) for t in ids]


@dataclass(frozen=True)
class Ownership:
    customer: str
    extruder: str
    acquisition: str  # bought | rented

    def to_json(self) -> dict:
        return {
            "customer": self.customer,
            "extruder": self.extruder,
            "acquisition": self.acquisition,
        }


class OwnershipTable:
    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._lock = threading.Lock()

    def load(self) -> list[Ownership]:
        if not self.path.exists():
            return []
        data = json.loads(self.path.read_text(encoding="utf-8"))
        return [Ownership(**row) for row in data]

    def save(self, rows: list[Ownership]):
        with self._lock:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text(
                json.dumps([r.to_json() for r in rows], indent=2), encoding="utf-8"
            )
            tmp.replace(self.path)

    def add(self, ownership: Ownership):
        rows = self.load()
        if ownership not in rows:
            rows.append(ownership)
        self.save(rows)

    def owned_by(self, customer: str) -> list[Ownership]:
        return [r for r in self.load() if r.customer == customer]

    def owns(self, customer: str, extruder: str) -> bool:
        return any(r.extruder == extruder for r in self.owned_by(customer))


class SyncStateFile:
    """Last-sync timestamps and checksums per (document, element)."""

    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._lock = threading.Lock()

    @staticmethod
    def key(document_id: str, element_id: str) -> str:
        return f"{document_id}/{element_id}"

    def load(self) -> dict[str, dict]:
        if not self.path.exists():
            return {}
        return json.loads(self.path.read_text(encoding="utf-8"))

    def get(self, document_id: str, element_id: str) -> dict | None:
        return self.load().get(self.key(document_id, element_id))

    def put(self, document_id: str, element_id: str, last_sync: float, checksum: str):
        with self._lock:
            state = self.load()
            state[self.key(document_id, element_id)] = {
                "last_sync": last_sync,
                "checksum": checksum,
            }
            self.path.parent.mkdir(parents=True, exist_ok=True)
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text(json.dumps(state, indent=2, sort_keys=True), encoding="utf-8")
            tmp.replace(self.path)


@dataclass
class DataDir:
    root: Path

    def __post_init__(self):
        self.root = Path(self.root)

    @property
    def leads(self) -> LeadLog:
        return LeadLog(self.root / "leads.jsonl")

    @property
    def tickets(self) -> TicketLog:
        return TicketLog(self.root / "tickets.jsonl")

    @property
    def ownership(self) -> OwnershipTable:
        return OwnershipTable(self.root / "ownership.json")

    @property
    def sync_state(self) -> SyncStateFile:
        return SyncStateFile(self.root / "sync_state.json")

    @property
    def assets(self) -> Path:
        return self.root / "assets"

    @property
    def stock_file(self) -> Path:
        return self.root / "stock.json"
