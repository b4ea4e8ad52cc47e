import pytest

from extrucat.config import AppConfig, TokenEntry
from extrucat.catalogue import CatalogueService
from extrucat.fixtures import demo_stock_service
from extrucat.persist import DataDir
from extrucat.rdf import TripleStore
from extrucat.seed import seed_demo
from extrucat.sparql import TemplateRegistry
from extrucat.technician import TechnicianService

ADMIN_TOKEN = "tok-admin"
CUSTOMER_TOKEN = "tok-acme"


class DemoEnv:
    def __init__(self, tmp_path):
        self.config = AppConfig(
            data_dir=tmp_path,
            tokens=(
                TokenEntry(ADMIN_TOKEN, "admin", "ops"),
                TokenEntry(CUSTOMER_TOKEN, "customer", "c-acme", "c-acme"),
            ),
        )
        self.data_dir = DataDir(tmp_path)
        self.store = TripleStore()
        seed_demo(self.store, self.data_dir, self.config)
        self.templates = TemplateRegistry(self.config.templates_dir)
        self.stock = demo_stock_service()
        self.catalogue = CatalogueService(
            self.store, self.templates, self.data_dir.leads, self.config
        )
        self.technician = TechnicianService(
            self.store,
            self.catalogue,
            self.stock,
            self.data_dir.ownership,
            self.data_dir.tickets,
            self.config,
        )


@pytest.fixture
def demo(tmp_path) -> DemoEnv:
    return DemoEnv(tmp_path)


@pytest.fixture
def ontology_store() -> TripleStore:
    store = TripleStore()
    store.load_turtle(path=AppConfig().ontology_path)
    return store
