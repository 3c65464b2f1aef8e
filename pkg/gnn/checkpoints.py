"""
Model checkpoints.

A checkpoint is one JSON document:

    {
        "format_version": 1,
        "architecture": {"n_nodes": ..., "filters": [...], "taps": ..., "activation": "...",
                         "classes": ..., "f_in": ...},
        "graph": {...},
        "parameters": {"layer0.h": {"shape": [...], "values": [...]}, ...}
    }

Values are written in the shortest decimal form that reads back to the same float64, so a loaded
model reproduces the saved one bit for bit. "graph" is free-form metadata describing where the
model's graph comes from (edge-list file, direction, ...).
"""

import json
import logging
from pathlib import Path

import numpy as np

from median_gnn.exceptions import CheckpointError
from median_gnn.files import atomic_write
from .model import Architecture, ModelParams

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


def checkpoint_document(params, graph_info=None):
    """Builds the JSON-ready checkpoint dictionary."""
    architecture = params.architecture
    return {
        "format_version": FORMAT_VERSION,
        "architecture": {
            "n_nodes": architecture.n_nodes,
            "filters": list(architecture.filters),
            "taps": architecture.taps,
            "activation": architecture.activation.label,
            "classes": architecture.classes,
            "f_in": architecture.f_in,
        },
        "graph": dict(graph_info or {}),
        "parameters": {
            name: {"shape": list(array.shape), "values": array.ravel().tolist()}
            for name, array in params.arrays().items()
        },
    }


def save_checkpoint(params, path, graph_info=None):
    """
    Writes a checkpoint atomically.

    Args:
        params (ModelParams): The parameters.
        path (str | Path): Destination file.
        graph_info (dict | None): Graph metadata stored alongside.

    Returns:
        Path: The written path.
    """
    text = json.dumps(checkpoint_document(params, graph_info), indent=1) + "\n"
    path = atomic_write(path, text)
    logger.info("saved %s checkpoint to %s", params.architecture.activation.label, path)
    return path


def parse_checkpoint(text):
    """
    Parses checkpoint text.

    Returns:
        tuple[ModelParams, dict]: The parameters and the graph metadata.

    Raises:
        CheckpointError: If the document is malformed, of another version, or its arrays do not
            match the architecture.
    """
    try:
        document = json.loads(text)
        version = document["format_version"]
        if version != FORMAT_VERSION:
            raise CheckpointError(f"unsupported checkpoint format version {version!r}")
        described = document["architecture"]
        architecture = Architecture(
            n_nodes=int(described["n_nodes"]),
            filters=tuple(described["filters"]),
            taps=int(described["taps"]),
            activation=described["activation"],
            classes=int(described["classes"]),
            f_in=int(described.get("f_in", 1)),
        )
        arrays = {}
        for name, entry in document["parameters"].items():
            values = np.array(entry["values"], dtype=np.float64)
            shape = tuple(entry["shape"])
            if values.size != int(np.prod(shape)):
                raise CheckpointError(
                    f"parameter '{name}' lists {values.size} values for shape {shape}"
                )
            arrays[name] = values.reshape(shape)
        params = ModelParams.from_arrays(architecture, arrays)
    except CheckpointError:
        raise
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as error:
        # ShapeError is a ValueError too
        raise CheckpointError(f"malformed checkpoint: {error}") from error
    return params, document.get("graph", {})


def load_checkpoint(path):
    """Reads a checkpoint file with `parse_checkpoint()`."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as error:
        raise CheckpointError(f"cannot read checkpoint {path}: {error}") from error
    return parse_checkpoint(text)
