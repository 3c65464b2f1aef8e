"""
CSV export of training reports.
"""

import csv
import io

from median_gnn.files import atomic_write

REPORT_COLUMNS = ["epoch", "train_loss", "val_loss", "val_acc", "seconds"]


def format_train_report(report, include_seconds=True):
    """
    Renders one CSV row per epoch.

    Floats use their shortest round-trip form and '.' decimals; rows end with LF.

    Args:
        report (TrainReport): The report.
        include_seconds (bool): Whether to add the wall-clock column, which differs between runs.

    Returns:
        str: The CSV text with a header row.
    """
    columns = REPORT_COLUMNS if include_seconds else REPORT_COLUMNS[:-1]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for record in report.epochs:
        metrics = (record.train_loss, record.val_loss, record.val_acc)
        row = [record.epoch] + [repr(float(value)) for value in metrics]
        if include_seconds:
            row.append(f"{record.seconds:.3f}")
        writer.writerow(row)
    return buffer.getvalue()


def write_train_report(report, path, include_seconds=True):
    """Writes `format_train_report()` atomically to path."""
    if not report.epochs:
        raise ValueError("cannot write an empty training report")
    return atomic_write(path, format_train_report(report, include_seconds))
