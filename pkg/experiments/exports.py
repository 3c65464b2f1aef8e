"""
CSV exports of a comparison.

Files written to the output directory:
    - results.csv: one row per (round, architecture), no wall-clock values
    - summary.csv: one row per architecture
    - timings.csv: wall time per (round, architecture)
    - curves/round{k}_{architecture}.csv: the per-epoch training curves
    - summary.xlsx: the summary as a formatted sheet, see `excel_functions`
"""

import csv
import io
import logging
from pathlib import Path

from median_gnn.files import atomic_write
from training.reports import write_train_report
from .excel_functions import write_summary_workbook

logger = logging.getLogger(__name__)

RESULT_COLUMNS = [
    "architecture",
    "round",
    "seed",
    "test_accuracy",
    "final_train_loss",
    "parameters",
    "dataset_hash",
]
SUMMARY_COLUMNS = ["architecture", "mean_accuracy", "std_accuracy", "parameters", "rounds"]
TIMING_COLUMNS = ["architecture", "round", "seconds"]


def _csv_text(columns, rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buffer.getvalue()


def format_results(results):
    return _csv_text(
        RESULT_COLUMNS,
        (
            [
                result.architecture,
                result.round_index,
                result.seed,
                repr(float(result.test_accuracy)),
                repr(float(result.final_train_loss)),
                result.parameters,
                result.dataset_hash,
            ]
            for result in results
        ),
    )


def format_summary(rows):
    return _csv_text(
        SUMMARY_COLUMNS,
        (
            [
                row.architecture,
                repr(float(row.mean_accuracy)),
                repr(float(row.std_accuracy)),
                row.parameters,
                row.rounds,
            ]
            for row in rows
        ),
    )


def format_timings(results):
    return _csv_text(
        TIMING_COLUMNS,
        ([result.architecture, result.round_index, f"{result.seconds:.3f}"] for result in results),
    )


def curve_path(out_dir, result):
    """curves/round{k}_{architecture}.csv, with ':' in the label replaced by '-'."""
    label = result.architecture.replace(":", "-")
    return Path(out_dir) / "curves" / f"round{result.round_index}_{label}.csv"


def emit_curves(report, path):
    """
    Writes the per-epoch curves of a training run: epoch, train_loss, val_loss, val_acc.

    Raises:
        ValueError: If the report has no epochs.
    """
    return write_train_report(report, path, include_seconds=False)


def write_outputs(out_dir, results, summary):
    """
    Writes every export of a comparison.

    Args:
        out_dir (str | Path): Output directory, created if missing.
        results (list[RoundResult]): Per-round results; those carrying a report get a curve file.
        summary (list[SummaryRow]): Per-architecture summary.

    Returns:
        list[Path]: The written files.
    """
    out_dir = Path(out_dir)
    written = [
        atomic_write(out_dir / "results.csv", format_results(results)),
        atomic_write(out_dir / "summary.csv", format_summary(summary)),
        atomic_write(out_dir / "timings.csv", format_timings(results)),
    ]
    for result in results:
        if result.report is not None and len(result.report):
            written.append(emit_curves(result.report, curve_path(out_dir, result)))
    written.append(write_summary_workbook(summary, out_dir / "summary.xlsx"))
    logger.info("wrote %d files to %s", len(written), out_dir)
    return written
