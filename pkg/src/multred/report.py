"""Report rows, corpus summaries, and CSV/JSON serialization.

Schema ``multred-report-v1``: one row per input tree, in input order, with
the reduction counters followed by the classification and loss metrics.
CSV output is RFC-4180 with a header row; the corpus summary is appended as
``#``-prefixed comment lines.  JSON output carries rows and summary in one
object.  Percentages are rounded to four decimals so equal runs serialize
byte-identically.
"""

from __future__ import annotations

import csv
import json
from typing import IO

from .pipeline import PipelineOutcome
from .reduce import ReductionReport

REPORT_SCHEMA = "multred-report-v1"

REPORT_COLUMNS = [
    "index",
    "line",
    "input_leaves",
    "input_labels",
    "contractions_uninformative",
    "contractions_dominated",
    "subtrees_deleted",
    "leaves_pruned_nonparticipating",
    "leaves_pruned_pendant_dup",
    "leaves_pruned_spanning",
    "output_leaves",
    "output_labels",
    "no_information",
    "classification",
    "taxon_loss_step1_pct",
    "taxon_loss_total_pct",
    "naive_loss_pct",
    "node_count_input",
    "node_count_singly",
]


def _pct(value: float) -> float:
    return round(value, 4)


def build_row(index: int, line: int, report: ReductionReport, outcome: PipelineOutcome) -> dict:
    return {
        "index": index,
        "line": line,
        "input_leaves": report.input_leaves,
        "input_labels": report.input_labels,
        "contractions_uninformative": report.contractions_uninformative,
        "contractions_dominated": report.contractions_dominated,
        "subtrees_deleted": report.subtrees_deleted,
        "leaves_pruned_nonparticipating": report.leaves_pruned_nonparticipating,
        "leaves_pruned_pendant_dup": report.leaves_pruned_pendant_dup,
        "leaves_pruned_spanning": report.leaves_pruned_spanning,
        "output_leaves": report.output_leaves,
        "output_labels": report.output_labels,
        "no_information": report.no_information,
        "classification": outcome.classification.value,
        "taxon_loss_step1_pct": _pct(outcome.taxon_loss_step1_pct),
        "taxon_loss_total_pct": _pct(outcome.taxon_loss_total_pct),
        "naive_loss_pct": _pct(outcome.naive_loss_pct),
        "node_count_input": outcome.node_count_input,
        "node_count_singly": outcome.node_count_singly,
    }


def summarize(rows: list[dict]) -> dict:
    """Corpus averages: class counts, step-one loss over all trees, total
    loss over second-step trees, and the naive all-mul-taxa-removed loss."""
    n = len(rows)
    by_class = {"NoInformation": 0, "SinglyMRF": 0, "SecondStepSingly": 0}
    for row in rows:
        by_class[row["classification"]] += 1
    second = [r for r in rows if r["classification"] == "SecondStepSingly"]

    def avg(values: list[float]) -> float:
        return _pct(sum(values) / len(values)) if values else 0.0

    return {
        "schema": REPORT_SCHEMA,
        "trees": n,
        "class_no_information": by_class["NoInformation"],
        "class_singly_mrf": by_class["SinglyMRF"],
        "class_second_step_singly": by_class["SecondStepSingly"],
        "pct_no_information": _pct(100.0 * by_class["NoInformation"] / n) if n else 0.0,
        "pct_singly_mrf": _pct(100.0 * by_class["SinglyMRF"] / n) if n else 0.0,
        "pct_second_step_singly": _pct(100.0 * by_class["SecondStepSingly"] / n) if n else 0.0,
        "avg_taxon_loss_step1_pct": avg([r["taxon_loss_step1_pct"] for r in rows]),
        "avg_taxon_loss_total_pct_second_step": avg([r["taxon_loss_total_pct"] for r in second]),
        "avg_naive_loss_pct": avg([r["naive_loss_pct"] for r in rows]),
    }


def write_csv_report(rows: list[dict], summary: dict, fh: IO[str]) -> None:
    writer = csv.DictWriter(fh, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        out = dict(row)
        out["no_information"] = "true" if row["no_information"] else "false"
        for key in ("taxon_loss_step1_pct", "taxon_loss_total_pct", "naive_loss_pct"):
            out[key] = f"{row[key]:.4f}"
        writer.writerow(out)
    for key, value in summary.items():
        fh.write(f"# {key}={value}\n")


def write_json_report(rows: list[dict], summary: dict, fh: IO[str]) -> None:
    json.dump({"schema": REPORT_SCHEMA, "rows": rows, "summary": summary}, fh, indent=2, sort_keys=True)
    fh.write("\n")


def format_summary(summary: dict) -> str:
    lines = [
        f"trees: {summary['trees']}",
        (
            "classes: "
            f"NoInformation={summary['class_no_information']} "
            f"({summary['pct_no_information']}%), "
            f"SinglyMRF={summary['class_singly_mrf']} "
            f"({summary['pct_singly_mrf']}%), "
            f"SecondStepSingly={summary['class_second_step_singly']} "
            f"({summary['pct_second_step_singly']}%)"
        ),
        f"avg taxon loss (step 1, all trees): {summary['avg_taxon_loss_step1_pct']}%",
        f"avg taxon loss (total, second-step trees): {summary['avg_taxon_loss_total_pct_second_step']}%",
        f"avg naive loss (all mul-taxa removed): {summary['avg_naive_loss_pct']}%",
    ]
    return "\n".join(lines)
