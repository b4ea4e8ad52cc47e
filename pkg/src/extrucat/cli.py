"""Operator CLI: load and inspect the ontology, seed demo data, run the
competency-question suite, benchmark the service actions and serve the API.

Report-producing commands (cq-suite, bench) write a CSV table and a PNG
figure side by side under --report-dir.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .config import AppConfig, load_config
from .persist import DataDir
from .rdf.store import TripleStore
from .rdf.turtle import TurtleSyntaxError


def _config(config_path: str | None, data_dir: str | None) -> AppConfig:
    cfg = load_config(config_path)
    if data_dir:
        cfg.data_dir = Path(data_dir)
    return cfg


@click.group()
def main():
    """Semantic extruder catalogue and after-sales service platform."""


@main.command()
@click.argument("ontology", type=click.Path(exists=True, dir_okay=False))
def load(ontology):
    """Parse an ontology file and report what it contains."""
    store = TripleStore()
    try:
        store.load_turtle(path=ontology)
    except TurtleSyntaxError as exc:
        raise click.ClickException(f"{ontology}: {exc}")
    click.echo(f"loaded {len(store)} triples from {ontology}")
    click.echo(f"prefixes: {', '.join(sorted(store.prefixes)) or '(none)'}")


@main.command()
@click.option("--dataset", default="demo", type=click.Choice(["demo", "bench50"]))
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--data-dir", default="var")
def seed(dataset, config_path, data_dir):
    """Load the ontology and seed a dataset into the data directory."""
    from .api import open_store
    from .seed import seed_bench, seed_demo

    cfg = _config(config_path, data_dir)
    cfg.data_dir.mkdir(parents=True, exist_ok=True)
    store = open_store(cfg)
    revision = seed_demo(store, DataDir(cfg.data_dir), cfg)
    if dataset == "bench50":
        revision = seed_bench(store, 47, cfg)
    click.echo(
        f"seeded {dataset}: {len(store)} triples at revision {revision} in {cfg.data_dir}"
    )


@main.command("cq-suite")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--data-dir", default="var")
@click.option("--cq-dir", default=None, type=click.Path(exists=True, file_okay=False))
@click.option("--report-dir", default=None, type=click.Path(file_okay=False))
@click.option("--fresh/--no-fresh", default=True,
              help="Seed a throwaway demo store instead of reading the data dir.")
def cq_suite(config_path, data_dir, cq_dir, report_dir, fresh):
    """Run every competency question and compare against expected rows."""
    import tempfile

    from .api import open_store
    from .cq import run_suite
    from .seed import seed_demo

    cfg = _config(config_path, data_dir)
    if fresh:
        cfg.data_dir = Path(tempfile.mkdtemp(prefix="extrucat-cq-"))
        store = TripleStore()
        seed_demo(store, DataDir(cfg.data_dir), cfg)
    else:
        store = open_store(cfg)
    report = run_suite(store.snapshot(), Path(cq_dir) if cq_dir else cfg.cq_dir)
    for warning in report.warnings:
        click.echo(f"warning: {warning}")
    for result in report.results:
        mark = "PASS" if result.passed else "FAIL"
        click.echo(
            f"{mark} CQ {result.case.id} ({result.elapsed_s * 1000:.1f} ms): "
            f"{result.case.question}"
        )
        if not result.passed:
            click.echo(f"     {result.detail}")
            click.echo(f"     rows: {json.dumps(result.actual_rows[:5])}")
    if report_dir:
        from .report import cq_report

        csv_path, png_path = cq_report(report, report_dir)
        click.echo(f"report: {csv_path} and {png_path}")
    click.echo(f"{sum(r.passed for r in report.results)}/{len(report.results)} passed")
    sys.exit(report.exit_code)


@main.command()
@click.option("--scenario", default="all",
              type=click.Choice(["all", "catalogue", "insertion", "solutions", "cad-import"]))
@click.option("--runs", default=20, show_default=True)
@click.option("--extruders", default=50, show_default=True)
@click.option("--report-dir", default="reports", type=click.Path(file_okay=False))
def bench(scenario, runs, extruders, report_dir):
    """Benchmark service actions against their response-time budgets."""
    from .bench import HARDWARE_NOTE, run_benchmarks
    from .report import bench_report

    click.echo(f"note: {HARDWARE_NOTE}")
    results = run_benchmarks(scenario, runs=runs, extruders=extruders)
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        click.echo(
            f"{mark} {r.action}: avg {r.avg_s * 1000:.1f} ms over {r.runs} runs "
            f"(stdev {r.stdev_s * 1000:.1f} ms, budget {r.budget_s:.1f} s)"
        )
    csv_path, png_path = bench_report(results, report_dir)
    click.echo(f"report: {csv_path} and {png_path}")
    sys.exit(0 if all(r.passed for r in results) else 1)


@main.command("export-snapshot")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--data-dir", default="var")
@click.option("-o", "--output", default="snapshot.ttl", type=click.Path(dir_okay=False))
def export_snapshot(config_path, data_dir, output):
    """Write the current store contents as one Turtle document."""
    from .api import open_store

    cfg = _config(config_path, data_dir)
    store = open_store(cfg)
    store.export_turtle(output)
    click.echo(f"wrote {len(store)} triples to {output}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--data-dir", default=None)
@click.option("--port", default=None, type=int)
def serve(config_path, data_dir, port):
    """Start the REST service (application tier)."""
    import uvicorn

    from .api import build_state, create_app

    cfg = _config(config_path, data_dir)
    if port is not None:
        cfg.port = port
    state = build_state(cfg)
    for warning in state.startup_warnings:
        click.echo(f"warning: {warning}", err=True)
    app = create_app(state)
    click.echo(f"serving on http://{cfg.host}:{cfg.port} (revision {state.store.revision})")
    uvicorn.run(app, host=cfg.host, port=cfg.port, log_level="warning")


if __name__ == "__main__":
    main()
