"""
Labeled graph-signal datasets and their text file format.

File format (UTF-8, LF line endings):

    N C count seed
    # class <label> <tag>          (one line per class, optional)
    <label> <v_0> <v_1> ... <v_{N-1}>   (one line per sample)

Values are written in the shortest decimal form that reads back to the same float64, so writing a
dataset, reading it back and writing it again gives identical bytes.
"""

import hashlib
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from median_gnn.exceptions import DatasetFormatError, LabelError
from median_gnn.files import atomic_write

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Dataset:
    """
    Labeled signals (x_i, y_i).

    Attributes:
        signals (np.ndarray): Read-only float64 array of shape (samples, N).
        labels (np.ndarray): Read-only integer labels of shape (samples,), in 0..C-1.
        class_map (tuple[str, ...]): class_map[label] tags the class (source node id, author).
        seed (int): Seed the dataset was generated with.

    Methods:
        `subset()`: The samples at some indices.
        `class_counts()`: Number of samples per label.
        `batch()`: Signals shaped (samples, 1, N) for the network.
    """

    signals: np.ndarray
    labels: np.ndarray
    class_map: tuple
    seed: int = 0

    def __post_init__(self):
        signals = np.array(self.signals, dtype=np.float64)
        labels = np.array(self.labels, dtype=np.int64)
        if signals.ndim != 2:
            raise DatasetFormatError(f"signals must have shape (samples, N), got {signals.shape}")
        if labels.shape != (signals.shape[0],):
            raise DatasetFormatError(
                f"{labels.shape[0] if labels.ndim else 0} labels for {signals.shape[0]} signals"
            )
        if not np.all(np.isfinite(signals)):
            raise DatasetFormatError("signals contain non-finite values")
        class_map = tuple(str(tag) for tag in self.class_map)
        if not class_map:
            raise DatasetFormatError("a dataset needs at least one class")
        if labels.size and (labels.min() < 0 or labels.max() >= len(class_map)):
            raise LabelError(
                f"labels must lie in 0..{len(class_map) - 1}, got {labels.min()}..{labels.max()}"
            )
        signals.flags.writeable = False
        labels.flags.writeable = False
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "class_map", class_map)
        object.__setattr__(self, "seed", int(self.seed))

    def __len__(self):
        return self.signals.shape[0]

    @property
    def n_nodes(self):
        return self.signals.shape[1]

    @property
    def n_classes(self):
        return len(self.class_map)

    def subset(self, indices):
        """The samples at the given indices, in that order."""
        indices = np.asarray(indices, dtype=np.intp)
        return Dataset(self.signals[indices], self.labels[indices], self.class_map, self.seed)

    def class_counts(self):
        return np.bincount(self.labels, minlength=self.n_classes)

    def batch(self):
        return self.signals[:, None, :]


def format_dataset(dataset):
    """
    Serializes a dataset to its text form.

    Returns:
        str: The file text.
    """
    lines = [f"{dataset.n_nodes} {dataset.n_classes} {len(dataset)} {dataset.seed}"]
    for label, tag in enumerate(dataset.class_map):
        lines.append(f"# class {label} {tag}")
    for label, signal in zip(dataset.labels.tolist(), dataset.signals.tolist()):
        lines.append(" ".join([str(label)] + [repr(value) for value in signal]))
    return "\n".join(lines) + "\n"


def dataset_hash(dataset):
    """SHA-256 hex digest of the serialized dataset."""
    return hashlib.sha256(format_dataset(dataset).encode("utf-8")).hexdigest()


def _header_fields(line):
    fields = line.split()
    if len(fields) != 4:
        raise DatasetFormatError(f"line 1: expected 'N C count seed', got {line.strip()!r}")
    try:
        return [int(value) for value in fields]
    except ValueError:
        raise DatasetFormatError(
            f"line 1: header fields must be integers, got {line.strip()!r}"
        ) from None


def parse_dataset(text):
    """
    Parses dataset text.

    Args:
        text (str): The file text.

    Returns:
        Dataset: The dataset.

    Raises:
        DatasetFormatError: If the header, a class line or a sample line is malformed, or the
            counts disagree with the header.
        LabelError: If a label is outside 0..C-1.
    """
    lines = text.splitlines()
    if not lines:
        raise DatasetFormatError("empty dataset file")
    n_nodes, n_classes, count, seed = _header_fields(lines[0])
    if n_nodes < 1 or n_classes < 1 or count < 0:
        raise DatasetFormatError(f"line 1: invalid sizes N={n_nodes} C={n_classes} count={count}")

    tags = [str(label) for label in range(n_classes)]
    labels, signals = [], []
    for line_number, line in enumerate(lines[1:], start=2):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            fields = stripped[1:].split(maxsplit=2)
            if len(fields) == 3 and fields[0] == "class":
                try:
                    label = int(fields[1])
                except ValueError:
                    raise DatasetFormatError(f"line {line_number}: bad class label") from None
                if not 0 <= label < n_classes:
                    raise LabelError(
                        f"line {line_number}: class {label} outside 0..{n_classes - 1}"
                    )
                tags[label] = fields[2]
            continue
        fields = stripped.split()
        if len(fields) != n_nodes + 1:
            raise DatasetFormatError(
                f"line {line_number}: expected a label and {n_nodes} values, "
                f"got {len(fields)} fields"
            )
        try:
            labels.append(int(fields[0]))
            signals.append([float(value) for value in fields[1:]])
        except ValueError:
            raise DatasetFormatError(f"line {line_number}: malformed number") from None
    if len(labels) != count:
        raise DatasetFormatError(f"header announces {count} samples, file has {len(labels)}")

    return Dataset(
        np.array(signals, dtype=np.float64).reshape(count, n_nodes),
        np.array(labels, dtype=np.int64),
        tuple(tags),
        seed,
    )


def write_dataset(dataset, path):
    """Writes a dataset file atomically; returns the SHA-256 of its text."""
    text = format_dataset(dataset)
    atomic_write(path, text)
    logger.info(
        "wrote %d samples (%d nodes, %d classes) to %s",
        len(dataset),
        dataset.n_nodes,
        dataset.n_classes,
        path,
    )
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def read_dataset(path):
    """Reads a dataset file with `parse_dataset()`."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise DatasetFormatError(f"cannot read dataset {path}: {error}") from error
    return parse_dataset(text)
