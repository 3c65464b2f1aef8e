"""
Helpers for the files the engine writes.

Every artifact (datasets, checkpoints, CSV and Excel reports, edge lists) is written to a
temporary file in the target directory and renamed over the destination, so readers never see a
half-written file.
"""

import os
from pathlib import Path

from django.core.files.temp import NamedTemporaryFile


def atomic_write(path, data):
    """
    Writes text (UTF-8, LF line endings) or bytes to a file atomically.

    Args:
        path (str | Path): Destination; parent directories are created.
        data (str | bytes): The content.

    Returns:
        Path: The destination path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = data.encode("utf-8") if isinstance(data, str) else data
    with NamedTemporaryFile(dir=path.parent, prefix=f".{path.name}.", delete=False) as handle:
        handle.write(payload)
        temp_name = handle.name
    try:
        os.replace(temp_name, path)
    except OSError:
        os.unlink(temp_name)
        raise
    return path


def atomic_save_workbook(workbook, path):
    """Saves an openpyxl workbook atomically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with NamedTemporaryFile(
        dir=path.parent, prefix=f".{path.name}.", suffix=".xlsx", delete=False
    ) as handle:
        temp_name = handle.name
    try:
        workbook.save(temp_name)
        os.replace(temp_name, path)
    except OSError:
        os.unlink(temp_name)
        raise
    return path
