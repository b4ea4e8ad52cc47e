"""Demo and benchmark datasets.

The demo seed loads the bundled ontology plus three extruders (one left
invisible), a solution library, CAD model annotations for the first machine
and two customer ownership records. Everything is deterministic so query
expectations elsewhere in the repo can be written against it.
"""

from __future__ import annotations

import shutil
from pathlib import Path

from .annotate import (
    BatchSpec,
    CadModelRef,
    ComponentSubmission,
    ExtruderSubmission,
    IrdiMapping,
    QuantityFeature,
    SubmissionError,
    build_extruder_triples,
    enrich_with_irdi,
    file_sha256,
    validate_submission,
)
from .config import AppConfig, data_path
from .ontology import Ontology
from .persist import DataDir, Ownership
from .rdf.store import TripleStore
from .rdf.terms import EXT, INST, OM, RDF, RDFS, IRI, Literal, Term, Triple


def demo_submissions() -> list[ExtruderSubmission]:
    return [
        ExtruderSubmission(
            local_id="E01",
            name="BlowMax 250",
            manufacturer="Lezo Machinery Works",
            description="Compact blow moulding extruder for small PET bottles.",
            visible=True,
            batch=BatchSpec(
                item_label="250 ml PET bottle",
                description="Batch of 250 ml PET bottles for carbonated drinks",
                volume=250.0,
                unit=OM.millilitre,
                max_item_width_m=0.08,
                max_item_height_m=0.18,
            ),
            dimensions=(2.8, 2.1, 5.5),
            throughput_bph=1300.0,
            components=[
                ComponentSubmission(
                    local_id="motor",
                    component_type=EXT.ACMotor,
                    label="M-180 drive motor",
                    part_code="UR-MTR-180",
                    features=[
                        QuantityFeature(OM.Frequency, OM.hertz, 60.0, "exact"),
                        QuantityFeature(OM.ElectricPotential, OM.volt, 230.0, "minimum"),
                        QuantityFeature(OM.ElectricPotential, OM.volt, 460.0, "maximum"),
                    ],
                ),
                ComponentSubmission(
                    local_id="hopper",
                    component_type=EXT.FeedHopper,
                    label="Gravity feed hopper",
                    part_code="UR-HOP-004",
                    features=[QuantityFeature(OM.Volume, OM.litre, 120.0, "exact")],
                ),
                ComponentSubmission(
                    local_id="screw",
                    component_type=EXT.Screw,
                    label="Single flight screw",
                    part_code="UR-SCR-010",
                    features=[QuantityFeature(OM.Length, OM.metre, 2.4, "exact")],
                ),
                ComponentSubmission(
                    local_id="head",
                    component_type=EXT.ExtrusionHeadForCircularProfiles,
                    label="Circular profile head",
                    part_code="UR-HED-300",
                    features=[QuantityFeature(OM.Length, OM.metre, 0.6, "exact")],
                ),
            ],
        ),
        ExtruderSubmission(
            local_id="E02",
            name="BlowMax 500",
            manufacturer="Arrate Plastics Systems",
            description="Mid-range extruder for half-litre HDPE bottles.",
            visible=True,
            batch=BatchSpec(
                item_label="500 ml HDPE bottle",
                description="Batch of 500 ml HDPE bottles",
                volume=500.0,
                unit=OM.millilitre,
                max_item_width_m=0.10,
                max_item_height_m=0.25,
            ),
            dimensions=(3.5, 2.4, 6.0),
            throughput_bph=1000.0,
            components=[
                ComponentSubmission(
                    local_id="motor",
                    component_type=EXT.DCMotor,
                    label="M-90 drive motor",
                    part_code="UR-MTR-090",
                    features=[QuantityFeature(OM.Frequency, OM.hertz, 50.0, "exact")],
                ),
                ComponentSubmission(
                    local_id="fan",
                    component_type=EXT.CoolingFan,
                    label="Barrel cooling fan",
                    part_code="UR-FAN-221",
                    features=[QuantityFeature(OM.Frequency, OM.hertz, 50.0, "exact")],
                ),
                ComponentSubmission(
                    local_id="head",
                    component_type=EXT.ExtrusionHeadForNonCircularProfiles,
                    label="Non-circular profile head",
                    part_code="UR-HED-400",
                ),
            ],
        ),
        ExtruderSubmission(
            local_id="E03",
            name="BlowMax 100",
            manufacturer="Lezo Machinery Works",
            description="Flexible extruder covering bottle sizes up to one litre.",
            visible=False,
            batch=BatchSpec(
                item_label="Multi-size PET bottle",
                description="Batches from 100 ml to 1 l",
                volume_range=(100.0, 1000.0),
                unit=OM.millilitre,
                max_item_width_m=0.09,
                max_item_height_m=0.30,
            ),
            dimensions=(2.5, 2.0, 5.0),
            throughput_bph=1500.0,
            components=[
                ComponentSubmission(
                    local_id="motor",
                    component_type=EXT.ACMotor,
                    label="M-120 drive motor",
                    part_code="UR-MTR-120",
                    features=[
                        QuantityFeature(OM.ElectricPotential, OM.volt, 400.0, "exact")
                    ],
                ),
            ],
        ),
    ]


#: document/element/position for each demo component model (all on E01).
DEMO_MODELS = [
    ("E01-hopper", "doc-ux250", "elem-hopper", (0.0, 0.0, -1.0)),
    ("E01-screw", "doc-ux250", "elem-screw", (0.4, 0.3, 1.2)),
    ("E01-head", "doc-ux250", "elem-head", (0.0, 0.2, 2.6)),
]


def _solution(local_id: str, title: str, related_to: IRI, steps: list[str]) -> list[Triple]:
    s = INST[local_id]
    triples = [
        Triple(s, RDF.type, EXT.Solution),
        Triple(s, RDFS.label, Literal.string(title)),
        Triple(s, EXT.relatedTo, related_to),
    ]
    cells = [INST[f"{local_id}-step{i}"] for i in range(len(steps))]
    triples.append(Triple(s, EXT.hasStep, cells[0]))
    for i, step in enumerate(steps):
        triples.append(Triple(cells[i], RDF.first, Literal.string(step)))
        nxt: Term = cells[i + 1] if i + 1 < len(cells) else RDF.nil
        triples.append(Triple(cells[i], RDF.rest, nxt))
    return triples


def solution_triples() -> list[Triple]:
    out: list[Triple] = []
    out += _solution(
        "sol-motor-overheating",
        "Motor overheating",
        EXT.Motor,
        [
            "Stop the extruder and let the motor cool down for 30 minutes",
            "Clean the motor ventilation grid and check the airflow",
            "Compare the motor current draw against the rated plate value",
        ],
    )
    out += _solution(
        "sol-extruder-stop",
        "Extruder stops suddenly",
        EXT.Extruder,
        [
            "Check the emergency stop chain and reset tripped switches",
            "Inspect the main breaker and the motor fuses",
            "Verify the hopper is not empty and the feed throat is clear",
            "Restart following the cold start procedure",
        ],
    )
    out += _solution(
        "sol-hopper-blockage",
        "Feed hopper blockage",
        EXT.FeedHopper,
        [
            "Close the feed gate and empty the hopper",
            "Remove bridged material with the supplied rod",
            "Refill with dried granulate and reopen the gate",
        ],
    )
    out += _solution(
        "sol-head-misaligned",
        "Extrusion head misalignment",
        EXT.ExtrusionHeadForProfiles,
        [
            "Loosen the head clamp bolts a quarter turn",
            "Re-centre the die against the mandrel reference marks",
        ],
    )
    return out


def demo_ownership() -> list[Ownership]:
    return [
        Ownership("c-acme", INST["E01"].value, "bought"),
        Ownership("c-acme", INST["E02"].value, "rented"),
        Ownership("c-borealis", INST["E02"].value, "bought"),
    ]


def _seed_assets(data_dir: DataDir) -> dict[str, tuple[Path, str]]:
    """Copy bundled meshes into the asset layout; returns path and checksum
    per element id."""
    cube = data_path("fixtures", "cube.gltf")
    out = {}
    for _, doc, elem, _ in DEMO_MODELS:
        target = data_dir.assets / doc / f"{elem}.gltf"
        target.parent.mkdir(parents=True, exist_ok=True)
        shutil.copyfile(cube, target)
        checksum = file_sha256(target)
        target.with_suffix(".gltf.sha256").write_text(checksum, encoding="utf-8")
        out[elem] = (target, checksum)
    return out


def seed_demo(
    store: TripleStore,
    data_dir: DataDir,
    config: AppConfig | None = None,
    irdi: IrdiMapping | None = None,
) -> int:
    """Load ontology + demo instances; returns the store revision.

    All submissions are validated before anything is written, so a bad
    dataset cannot leave a partial seed behind.
    """
    config = config or AppConfig()
    irdi = irdi or IrdiMapping.load(config.irdi_path)
    if len(store) == 0:
        store.load_turtle(path=config.ontology_path)
    store.define_prefix("", INST.base)
    store.define_prefix("ext", EXT.base)
    store.define_prefix("om", OM.base)
    store.define_prefix("s4inma", "https://w3id.org/def/saref4inma#")
    store.define_prefix("dcterms", "http://purl.org/dc/terms/")

    subs = demo_submissions()
    ontology = Ontology(store.snapshot(), config)
    problems: list[str] = []
    for sub in subs:
        problems += [f"{sub.local_id}: {e}" for e in validate_submission(sub, ontology)]
    if problems:
        raise SubmissionError(problems)

    triples: list[Triple] = []
    for sub in subs:
        triples += build_extruder_triples(sub)
        for comp in sub.components:
            triples += enrich_with_irdi(comp.component_type, irdi, ontology).triples
    triples += solution_triples()

    assets = _seed_assets(data_dir)
    for comp_local, doc, elem, position in DEMO_MODELS:
        path, checksum = assets[elem]
        from .annotate import build_cad_triples  # local import avoids a cycle

        ref = CadModelRef(
            document_id=doc,
            element_id=elem,
            file_path=path,
            format="glTF",
            position=position,
            checksum=checksum,
            stored_path=path.relative_to(data_dir.root).as_posix(),
        )
        triples += build_cad_triples(INST[comp_local], ref)

    revision = store.insert(triples)
    ownership = data_dir.ownership
    for row in demo_ownership():
        ownership.add(row)
    return revision


def bench_submissions(count: int) -> list[ExtruderSubmission]:
    """Synthetic machines for load benchmarks: two components each, with
    features and a model annotation, sized around the demo values."""
    subs = []
    for i in range(count):
        lid = f"B{i:03d}"
        subs.append(
            ExtruderSubmission(
                local_id=lid,
                name=f"BenchLine {i:03d}",
                manufacturer="Lezo Machinery Works",
                description=f"Benchmark machine {i:03d} with synthetic characteristics.",
                visible=True,
                batch=BatchSpec(
                    item_label=f"{200 + i} ml bottle",
                    description=f"Batch of {200 + i} ml bottles",
                    volume=200.0 + i,
                    unit=OM.millilitre,
                    max_item_width_m=0.06 + 0.001 * (i % 10),
                    max_item_height_m=0.15 + 0.002 * (i % 10),
                ),
                dimensions=(2.0 + 0.05 * (i % 20), 2.0, 4.0 + 0.1 * (i % 10)),
                throughput_bph=800.0 + 25 * (i % 30),
                components=[
                    ComponentSubmission(
                        local_id="motor",
                        component_type=EXT.ACMotor if i % 2 else EXT.DCMotor,
                        label=f"Drive motor {i:03d}",
                        part_code=f"BN-MTR-{i:03d}",
                        features=[
                            QuantityFeature(OM.Frequency, OM.hertz, 50.0 + (i % 2) * 10),
                            QuantityFeature(OM.ElectricPotential, OM.volt, 230.0, "minimum"),
                        ],
                    ),
                    ComponentSubmission(
                        local_id="hopper",
                        component_type=EXT.FeedHopper,
                        label=f"Feed hopper {i:03d}",
                        part_code=f"BN-HOP-{i:03d}",
                        features=[QuantityFeature(OM.Volume, OM.litre, 100.0 + i)],
                        cad=CadModelRef(
                            document_id="doc-ux250",
                            element_id="elem-hopper",
                            file_path=Path("assets/doc-ux250/elem-hopper.gltf"),
                            format="glTF",
                            position=(0.0, 0.0, -1.0),
                            checksum="",
                        ),
                    ),
                ],
            )
        )
    return subs


def seed_bench(store: TripleStore, count: int = 50, config: AppConfig | None = None) -> int:
    config = config or AppConfig()
    if len(store) == 0:
        store.load_turtle(path=config.ontology_path)
    triples: list[Triple] = []
    for sub in bench_submissions(count):
        triples += build_extruder_triples(sub)
    return store.insert(triples)
