"""Response-time benchmarks for the four measured service actions, each
compared to its published budget. Budgets were measured on a small cloud VM;
desk machines are strictly faster, so they are upper bounds here."""

from __future__ import annotations

import statistics
import tempfile
import time
from dataclasses import dataclass
from pathlib import Path

from .annotate import (
    BatchSpec,
    CadModelRef,
    ComponentSubmission,
    ExtruderSubmission,
    QuantityFeature,
    build_extruder_triples,
)
from .cad import AssetStore, HttpCadClient, export_model
from .catalogue import CatalogueService
from .config import AppConfig
from .fixtures import CadFixtureServer
from .persist import DataDir
from .rdf.store import TripleStore
from .rdf.terms import EXT, INST, OM
from .seed import seed_bench, seed_demo
from .sparql.templates import TemplateRegistry
from .technician import TechnicianService
from .fixtures import demo_stock_service

#: action -> budget in seconds
BUDGETS = {
    "catalogue_loading": 1.0,
    "extruder_insertion": 2.5,
    "solutions_loading": 1.5,
    "cad_import": 2.8,
}

HARDWARE_NOTE = (
    "budgets come from a 1-vCPU cloud deployment; a desk machine should sit "
    "well under them"
)


@dataclass
class BenchResult:
    action: str
    runs: int
    avg_s: float
    stdev_s: float
    budget_s: float

    @property
    def passed(self) -> bool:
        return self.avg_s < self.budget_s

    def to_row(self) -> dict:
        return {
            "action": self.action,
            "runs": self.runs,
            "avg_s": round(self.avg_s, 4),
            "stdev_s": round(self.stdev_s, 4),
            "budget_s": self.budget_s,
            "passed": self.passed,
        }


def _result(action: str, samples: list[float]) -> BenchResult:
    return BenchResult(
        action=action,
        runs=len(samples),
        avg_s=statistics.fmean(samples),
        stdev_s=statistics.stdev(samples) if len(samples) > 1 else 0.0,
        budget_s=BUDGETS[action],
    )


def _bench_store(extruders: int) -> tuple[TripleStore, AppConfig, DataDir]:
    tmp = Path(tempfile.mkdtemp(prefix="extrucat-bench-"))
    config = AppConfig(data_dir=tmp)
    store = TripleStore()
    data_dir = DataDir(tmp)
    seed_demo(store, data_dir, config)
    if extruders > 3:
        seed_bench(store, extruders - 3, config)
    return store, config, data_dir


def bench_catalogue(runs: int = 20, extruders: int = 50) -> BenchResult:
    store, config, data_dir = _bench_store(extruders)
    catalogue = CatalogueService(
        store, TemplateRegistry(config.templates_dir), data_dir.leads, config
    )
    samples = []
    for _ in range(runs):
        started = time.perf_counter()
        views = catalogue.get_all_extruders()
        samples.append(time.perf_counter() - started)
        assert len(views) >= extruders - 1
    return _result("catalogue_loading", samples)


def _insertion_submission(i: int) -> ExtruderSubmission:
    return ExtruderSubmission(
        local_id=f"INS{i:03d}",
        name=f"Inserted {i:03d}",
        manufacturer="Lezo Machinery Works",
        description="Machine inserted during the benchmark.",
        batch=BatchSpec(
            item_label="330 ml bottle",
            description="Benchmark batch",
            volume=330.0,
            unit=OM.millilitre,
        ),
        dimensions=(2.4, 2.0, 5.0),
        throughput_bph=1100.0,
        components=[
            ComponentSubmission(
                local_id="motor",
                component_type=EXT.ACMotor,
                label="Bench motor",
                features=[
                    QuantityFeature(OM.Frequency, OM.hertz, 60.0),
                    QuantityFeature(OM.ElectricPotential, OM.volt, 230.0, "minimum"),
                    QuantityFeature(OM.ElectricPotential, OM.volt, 460.0, "maximum"),
                ],
            )
        ],
    )


def bench_insertion(runs: int = 20, extruders: int = 50) -> BenchResult:
    from .annotate import register_extruder

    store, config, _ = _bench_store(extruders)
    samples = []
    for i in range(runs):
        sub = _insertion_submission(i)
        started = time.perf_counter()
        register_extruder(store, sub, config)
        samples.append(time.perf_counter() - started)
    return _result("extruder_insertion", samples)


def bench_solutions(runs: int = 20) -> BenchResult:
    store, config, data_dir = _bench_store(3)
    catalogue = CatalogueService(
        store, TemplateRegistry(config.templates_dir), data_dir.leads, config
    )
    technician = TechnicianService(
        store, catalogue, demo_stock_service(), data_dir.ownership, data_dir.tickets, config
    )
    samples = []
    for _ in range(runs):
        started = time.perf_counter()
        entries = technician.solutions_for(INST["E01-motor"])
        samples.append(time.perf_counter() - started)
        assert entries
    return _result("solutions_loading", samples)


def bench_cad_import(runs: int = 20) -> BenchResult:
    """List documents, export one element and annotate it, per run against
    the bundled fixture CAD server."""
    store, config, data_dir = _bench_store(3)
    samples = []
    with CadFixtureServer() as server:
        client = HttpCadClient(server.url)
        for i in range(runs):
            assets = AssetStore(Path(tempfile.mkdtemp(prefix="extrucat-cad-")) / "assets")
            started = time.perf_counter()
            docs = client.list_documents()
            doc = docs[0]
            element = doc.elements[0]
            result = export_model(client, assets, doc.id, element.id, "glTF")
            from .annotate import CadModelRef, annotate_cad

            annotate_cad(
                store,
                INST["E01-hopper"],
                CadModelRef(
                    document_id=doc.id,
                    element_id=element.id,
                    file_path=result.path,
                    format="glTF",
                    position=(0.0, 0.0, -1.0),
                    checksum=result.checksum,
                    stored_path=f"assets/{doc.id}/{element.id}.gltf",
                ),
            )
            samples.append(time.perf_counter() - started)
    return _result("cad_import", samples)


def run_benchmarks(
    scenario: str = "all", runs: int = 20, extruders: int = 50
) -> list[BenchResult]:
    bench_map = {
        "catalogue": lambda: bench_catalogue(runs, extruders),
        "insertion": lambda: bench_insertion(runs, extruders),
        "solutions": lambda: bench_solutions(runs),
        "cad-import": lambda: bench_cad_import(runs),
    }
    if scenario == "all":
        return [fn() for fn in bench_map.values()]
    if scenario not in bench_map:
        raise ValueError(f"unknown scenario {scenario!r}; pick from {sorted(bench_map)} or 'all'")
    return [bench_map[scenario]()]
