"""Application configuration.

Plain ``key = value`` text files; ``#`` starts a comment, repeated ``token``
keys accumulate. Environment variables EXTRUCAT_PORT, EXTRUCAT_DATA_DIR and
EXTRUCAT_TOKEN override their file counterparts.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .rdf.terms import EXT, IRI


def data_path(*parts: str) -> Path:
    """Path inside the packaged data directory (fixtures, templates, queries)."""
    root = resources.files("extrucat") / "data"
    return Path(str(root.joinpath(*parts)))


@dataclass(frozen=True)
class TokenEntry:
    token: str
    role: str  # "admin" | "customer"
    principal: str
    customer_id: str | None = None


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8742
    data_dir: Path = Path("var")
    ontology_path: Path = field(default_factory=lambda: data_path("extruont_mini.ttl"))
    templates_dir: Path = field(default_factory=lambda: data_path("templates"))
    cq_dir: Path = field(default_factory=lambda: data_path("cq"))
    irdi_path: Path = field(default_factory=lambda: data_path("irdi.csv"))
    allowed_origins: tuple[str, ...] = ("http://localhost:5173",)
    tokens: tuple[TokenEntry, ...] = ()
    stock_url: str | None = None  # None: in-process fixture stock service
    cad_url: str | None = None
    cad_token: str | None = None

    # Ontology wiring: which properties mean what.
    parthood_properties: tuple[IRI, ...] = (EXT.hasComponent,)
    feature_properties: tuple[IRI, ...] = (
        EXT.hasFeature,
        EXT.hasMinimumFeature,
        EXT.hasMaximumFeature,
    )
    related_to_property: IRI = EXT.relatedTo
    visible_property: IRI = EXT.visible

    @property
    def assets_dir(self) -> Path:
        return self.data_dir / "assets"

    @property
    def wal_path(self) -> Path:
        return self.data_dir / "wal.ttl"

    def token_entry(self, token: str) -> TokenEntry | None:
        for entry in self.tokens:
            if entry.token == token:
                return entry
        return None


_QUALIFIER_MAP = {
    "exact": EXT.hasFeature,
    "minimum": EXT.hasMinimumFeature,
    "maximum": EXT.hasMaximumFeature,
}


def qualifier_property(qualifier: str) -> IRI:
    try:
        return _QUALIFIER_MAP[qualifier]
    except KeyError:
        raise ValueError(
            f"unknown qualifier {qualifier!r}; expected one of {sorted(_QUALIFIER_MAP)}"
        )


def qualifier_for_property(prop: IRI) -> str | None:
    for name, iri in _QUALIFIER_MAP.items():
        if iri == prop:
            return name
    return None


def _parse_token_value(value: str) -> TokenEntry:
    parts = [p.strip() for p in value.split(",")]
    if len(parts) < 3:
        raise ValueError(
            f"token entry must be 'secret, role, principal[, customer_id]': {value!r}"
        )
    token, role, principal = parts[0], parts[1], parts[2]
    if role not in ("admin", "customer"):
        raise ValueError(f"unknown role {role!r} in token entry")
    customer = parts[3] if len(parts) > 3 else (principal if role == "customer" else None)
    return TokenEntry(token, role, principal, customer)


def load_config(path: Path | str | None = None, env: dict | None = None) -> AppConfig:
    env = dict(os.environ if env is None else env)
    values: dict[str, str] = {}
    tokens: list[TokenEntry] = []
    if path is not None:
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key == "token":
                tokens.append(_parse_token_value(value))
            else:
                values[key] = value

    cfg = AppConfig()
    if "host" in values:
        cfg.host = values["host"]
    if "port" in values:
        cfg.port = int(values["port"])
    if "data_dir" in values:
        cfg.data_dir = Path(values["data_dir"])
    if "ontology_path" in values:
        cfg.ontology_path = Path(values["ontology_path"])
    if "templates_dir" in values:
        cfg.templates_dir = Path(values["templates_dir"])
    if "cq_dir" in values:
        cfg.cq_dir = Path(values["cq_dir"])
    if "irdi_path" in values:
        cfg.irdi_path = Path(values["irdi_path"])
    if "allowed_origins" in values:
        cfg.allowed_origins = tuple(
            o.strip() for o in values["allowed_origins"].split(",") if o.strip()
        )
    if "stock_url" in values:
        cfg.stock_url = values["stock_url"] or None
    if "cad_url" in values:
        cfg.cad_url = values["cad_url"] or None
    if "cad_token" in values:
        cfg.cad_token = values["cad_token"] or None
    if "parthood_properties" in values:
        cfg.parthood_properties = tuple(
            IRI(v.strip()) for v in values["parthood_properties"].split(",") if v.strip()
        )
    if "related_to_property" in values:
        cfg.related_to_property = IRI(values["related_to_property"])
    if "visible_property" in values:
        cfg.visible_property = IRI(values["visible_property"])
    if tokens:
        cfg.tokens = tuple(tokens)

    if "EXTRUCAT_PORT" in env:
        cfg.port = int(env["EXTRUCAT_PORT"])
    if "EXTRUCAT_DATA_DIR" in env:
        cfg.data_dir = Path(env["EXTRUCAT_DATA_DIR"])
    if "EXTRUCAT_TOKEN" in env:
        cfg.tokens = cfg.tokens + (_parse_token_value(env["EXTRUCAT_TOKEN"]),)
    return cfg
