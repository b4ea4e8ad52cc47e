"""Report writers: delimited tables plus matplotlib figures side by side."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bench import BenchResult
from .cq import CqReport


def write_csv(path: Path | str, rows: list[dict], fieldnames: list[str] | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if not rows:
        path.write_text("", encoding="utf-8")
        return path
    fieldnames = fieldnames or list(rows[0].keys())
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
    return path


def bench_report(results: list[BenchResult], out_dir: Path | str) -> tuple[Path, Path]:
    """bench.csv plus a measured-vs-budget bar chart."""
    out_dir = Path(out_dir)
    csv_path = write_csv(out_dir / "bench.csv", [r.to_row() for r in results])

    labels = [r.action for r in results]
    measured = [r.avg_s for r in results]
    budgets = [r.budget_s for r in results]
    x = range(len(results))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar([i - 0.2 for i in x], measured, width=0.4, label="measured avg",
           color=["#2a9d8f" if r.passed else "#e76f51" for r in results])
    ax.bar([i + 0.2 for i in x], budgets, width=0.4, label="budget", color="#bdbdbd")
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=20, ha="right")
    ax.set_ylabel("seconds")
    ax.set_title("Service response times against budgets")
    ax.legend()
    fig.tight_layout()
    png_path = out_dir / "bench.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return csv_path, png_path


def cq_report(report: CqReport, out_dir: Path | str) -> tuple[Path, Path]:
    """cq_results.csv plus a per-question runtime chart colored by outcome."""
    out_dir = Path(out_dir)
    rows = [
        {
            "id": r.case.id,
            "question": r.case.question,
            "passed": r.passed,
            "expected_rows": len(r.case.expected),
            "actual_rows": len(r.actual_rows),
            "elapsed_ms": round(r.elapsed_s * 1000, 3),
            "detail": r.detail,
        }
        for r in report.results
    ]
    csv_path = write_csv(out_dir / "cq_results.csv", rows)

    fig, ax = plt.subplots(figsize=(7, 4))
    ids = [r.case.id for r in report.results]
    times = [r.elapsed_s * 1000 for r in report.results]
    colors = ["#2a9d8f" if r.passed else "#e76f51" for r in report.results]
    ax.bar(ids, times, color=colors)
    ax.set_ylabel("milliseconds")
    ax.set_xlabel("competency question")
    ax.set_title("Competency question runtimes (green=pass, red=fail)")
    fig.tight_layout()
    png_path = out_dir / "cq_results.png"
    fig.savefig(png_path, dpi=120)
    plt.close(fig)
    return csv_path, png_path
