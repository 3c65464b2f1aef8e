"""
This module composes the layers into the network: filter bank -> activation -> ... -> softmax.

The included pieces are:
    - Activation: parsed activation strings ("relu", "static-median:r", "dynamic-median:R")
    - Architecture: layer widths, taps, activation and class count
    - ModelParams: every trainable array of one network, addressable by name
    - GraphArtifacts: the shift operator and neighborhood table a network runs on
    - model_forward / model_backward: the full forward and backward passes
    - GraphNeuralNetwork: parameters and graph artifacts bundled for training and evaluation
"""

import logging
import re
from dataclasses import dataclass, field

import numpy as np

from graphs.neighborhoods import build_neighborhood_table, resolve_direction
from graphs.operators import normalized_adjacency
from median_gnn.exceptions import ShapeError
from .layers import (
    DynamicMedianParams,
    FilterBankParams,
    LayerCache,
    ReadoutParams,
    as_signal_batch,
    cross_entropy,
    dynamic_median_backward,
    dynamic_median_forward,
    filter_backward,
    filter_forward,
    readout_backward,
    readout_forward,
    relu_backward,
    relu_forward,
    static_median_backward,
    static_median_forward,
)

logger = logging.getLogger(__name__)

RELU = "relu"
STATIC_MEDIAN = "static-median"
DYNAMIC_MEDIAN = "dynamic-median"

ACTIVATION_ALIASES = {
    RELU: RELU,
    STATIC_MEDIAN: STATIC_MEDIAN,
    "med": STATIC_MEDIAN,
    DYNAMIC_MEDIAN: DYNAMIC_MEDIAN,
    "dyn-med": DYNAMIC_MEDIAN,
}

ACTIVATION_PATTERN = re.compile(r"^\s*([a-z-]+)\s*(?::\s*(\d+))?\s*$")


@dataclass(frozen=True)
class Activation:
    """
    An activation function choice.

    Attributes:
        kind (str): "relu", "static-median" or "dynamic-median".
        reach (int): Hop radius r of a static median, or R of a dynamic median; 0 for ReLU.
    """

    kind: str
    reach: int = 0

    def __post_init__(self):
        if self.kind not in (RELU, STATIC_MEDIAN, DYNAMIC_MEDIAN):
            raise ValueError(f"unknown activation kind {self.kind!r}")
        if self.reach < 0:
            raise ValueError("activation reach must be non-negative")
        if self.kind == RELU and self.reach:
            raise ValueError("relu takes no reach")

    @classmethod
    def parse(cls, text):
        """
        Parses "relu", "static-median:r", "med:r", "dynamic-median:R" or "dyn-med:R".

        Raises:
            ValueError: If the text is not a known activation.
        """
        match = ACTIVATION_PATTERN.match(str(text).lower())
        if not match or match.group(1) not in ACTIVATION_ALIASES:
            raise ValueError(
                f"unknown activation {text!r}; use relu, static-median:r or dynamic-median:R"
            )
        kind = ACTIVATION_ALIASES[match.group(1)]
        if kind == RELU:
            if match.group(2) is not None:
                raise ValueError("relu takes no reach")
            return cls(RELU)
        if match.group(2) is None:
            raise ValueError(f"{kind} needs a reach, e.g. {kind}:1")
        return cls(kind, int(match.group(2)))

    @property
    def label(self):
        """Canonical text form, the inverse of `parse()`."""
        return self.kind if self.kind == RELU else f"{self.kind}:{self.reach}"

    @property
    def max_hop(self):
        """Largest hop the activation reads from the neighborhood table."""
        return self.reach

    @property
    def parameters_per_layer(self):
        return self.reach + 1 if self.kind == DYNAMIC_MEDIAN else 0

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class Architecture:
    """
    Shape of a network.

    Attributes:
        n_nodes (int): Graph size N.
        filters (tuple[int, ...]): Output features of every filter-bank layer.
        taps (int): Filter taps K of every layer.
        activation (Activation): Activation applied after every filter bank.
        classes (int): Number of classes C.
        f_in (int): Features of the input signal.
    """

    n_nodes: int
    filters: tuple = (32,)
    taps: int = 5
    activation: Activation = field(default_factory=lambda: Activation(RELU))
    classes: int = 5
    f_in: int = 1

    def __post_init__(self):
        object.__setattr__(self, "filters", tuple(int(width) for width in self.filters))
        if isinstance(self.activation, str):
            object.__setattr__(self, "activation", Activation.parse(self.activation))
        counts = {"n_nodes": self.n_nodes, "taps": self.taps, "classes": self.classes}
        counts["f_in"] = self.f_in
        for name, value in counts.items():
            if value < 1:
                raise ValueError(f"{name} must be positive, got {value}")
        if not self.filters or min(self.filters) < 1:
            raise ValueError(f"filter widths must be positive, got {self.filters}")

    @property
    def widths(self):
        """Input and output feature counts of every layer."""
        sizes = (self.f_in,) + self.filters
        return list(zip(sizes[:-1], sizes[1:]))

    @property
    def conv_parameters(self):
        """Trainable parameters of the graph layers: filter taps plus median weights."""
        return sum(
            f_in * f_out * self.taps + self.activation.parameters_per_layer
            for f_in, f_out in self.widths
        )

    @property
    def readout_in_dim(self):
        return self.filters[-1] * self.n_nodes

    @property
    def n_parameters(self):
        """All trainable parameters, readout included."""
        return self.conv_parameters + (self.readout_in_dim + 1) * self.classes


@dataclass
class LayerParams:
    """Parameters of one graph layer; median is None unless the activation is dynamic."""

    bank: FilterBankParams
    median: DynamicMedianParams = None


@dataclass
class ModelParams:
    """
    Every trainable array of a network.

    Attributes:
        architecture (Architecture): The shape the arrays follow.
        layers (list[LayerParams]): Graph layers, input first.
        readout (ReadoutParams): The softmax layer.

    Methods:
        `initialize()`: Seeded initialization.
        `arrays()`: Name -> array mapping of the live parameter arrays.
    """

    architecture: Architecture
    layers: list
    readout: ReadoutParams

    @classmethod
    def initialize(cls, architecture, seed):
        """
        Draws filter taps and readout uniformly in +-sqrt(1 / fan_in) from one seeded generator;
        dynamic median weights start at (1, 0, ..., 0).

        Median weights consume no random numbers, so architectures that differ only in their
        activation start from identical taps and readout for a given seed.
        """
        rng = np.random.default_rng(seed)
        layers = []
        for f_in, f_out in architecture.widths:
            bank = FilterBankParams.initialize(f_in, f_out, architecture.taps, rng)
            median = None
            if architecture.activation.kind == DYNAMIC_MEDIAN:
                median = DynamicMedianParams.identity(architecture.activation.reach)
            layers.append(LayerParams(bank, median))
        readout = ReadoutParams.initialize(architecture.readout_in_dim, architecture.classes, rng)
        return cls(architecture, layers, readout)

    def arrays(self):
        """
        Returns the parameter arrays keyed by name ("layer0.h", "layer0.omega", "readout.weight",
        "readout.bias"). The arrays are the live ones: in-place updates change the model.
        """
        named = {}
        for index, layer in enumerate(self.layers):
            named[f"layer{index}.h"] = layer.bank.h
            if layer.median is not None:
                named[f"layer{index}.omega"] = layer.median.omega
        named["readout.weight"] = self.readout.weight
        named["readout.bias"] = self.readout.bias
        return named

    @property
    def n_parameters(self):
        return sum(array.size for array in self.arrays().values())

    @classmethod
    def from_arrays(cls, architecture, arrays):
        """
        Rebuilds parameters from a name -> array mapping, checking every shape.

        Raises:
            ShapeError: If an array is missing, unexpected or of the wrong shape.
        """
        template = cls.initialize(architecture, seed=0)
        expected = template.arrays()
        missing = sorted(set(expected) - set(arrays))
        unexpected = sorted(set(arrays) - set(expected))
        if missing or unexpected:
            raise ShapeError(f"parameter names differ: missing {missing}, unexpected {unexpected}")
        for name, array in expected.items():
            values = np.asarray(arrays[name], dtype=np.float64)
            if values.shape != array.shape:
                raise ShapeError(
                    f"parameter '{name}' has shape {values.shape}, expected {array.shape}"
                )
            array[...] = values
        return template

    def copy(self):
        arrays = {name: array.copy() for name, array in self.arrays().items()}
        return ModelParams.from_arrays(self.architecture, arrays)


@dataclass(frozen=True)
class GraphArtifacts:
    """
    The graph side of a network.

    The filter and the median windows aggregate along the same arcs: with direction "in" row i
    of the shift mixes the in-neighbors of i, with "out" the normalized adjacency is transposed
    so it mixes the out-neighbors, matching the neighborhood table.

    Attributes:
        shift (ShiftMatrix): The operator the filter banks use.
        table (NeighborhoodTable | None): Neighborhoods for median activations.
        direction (str): "in" or "out".
    """

    shift: object
    table: object = None
    direction: str = "in"

    @classmethod
    def from_graph(cls, graph, activation, direction=None):
        """Builds the oriented shift and, for median activations, the neighborhood table."""
        direction = resolve_direction(direction)
        shift = normalized_adjacency(graph)
        if direction == "out":
            shift = shift.transposed()
        table = None
        if activation.kind != RELU:
            table = build_neighborhood_table(graph, activation.max_hop, direction=direction)
        return cls(shift, table, direction)


@dataclass
class ModelCache:
    """Per-layer caches of one forward pass."""

    filters: list = field(default_factory=list)
    activations: list = field(default_factory=list)
    readout: LayerCache = field(default_factory=LayerCache)
    probs: np.ndarray = None


def _activation_forward(activation, layer, artifacts, x, cache):
    if activation.kind == RELU:
        return relu_forward(x, cache)
    if artifacts.table is None:
        raise ShapeError(f"{activation.label} needs a neighborhood table")
    if activation.kind == STATIC_MEDIAN:
        return static_median_forward(x, artifacts.table, activation.reach, cache)
    return dynamic_median_forward(x, artifacts.table, layer.median, cache)


def model_forward(params, artifacts, x):
    """
    Runs the network on a signal batch.

    Args:
        params (ModelParams): The parameters.
        artifacts (GraphArtifacts): Shift operator and neighborhood table.
        x (array_like): Signals of shape (B, f_in, N), or (B, N) for single-feature signals.

    Returns:
        tuple[np.ndarray, ModelCache]: Class probabilities of shape (B, C) and the cache for
            `model_backward()`.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 2:
        x = x[:, None, :]
    x = as_signal_batch(x, params.architecture.n_nodes)
    activation = params.architecture.activation
    cache = ModelCache()
    for layer in params.layers:
        filter_cache, activation_cache = LayerCache(), LayerCache()
        x = filter_forward(layer.bank, artifacts.shift, x, filter_cache)
        x = _activation_forward(activation, layer, artifacts, x, activation_cache)
        cache.filters.append(filter_cache)
        cache.activations.append(activation_cache)
    cache.probs = readout_forward(params.readout, x, cache.readout)
    return cache.probs, cache


def model_backward(params, artifacts, cache, labels):
    """
    Backward pass of `model_forward()` for the mean cross-entropy loss.

    Args:
        params (ModelParams): The parameters used in the forward pass.
        artifacts (GraphArtifacts): Shift operator and neighborhood table.
        cache (ModelCache): The forward cache.
        labels (array_like): Integer labels of shape (B,).

    Returns:
        tuple[float, dict]: The loss and the gradient of every array named in
            `ModelParams.arrays()`.
    """
    loss, grad_logits = cross_entropy(cache.probs, labels)
    grads = {}
    grads["readout.weight"], grads["readout.bias"], grad = readout_backward(
        params.readout, cache.readout, grad_logits
    )
    activation = params.architecture.activation
    for index in range(len(params.layers) - 1, -1, -1):
        layer = params.layers[index]
        activation_cache = cache.activations[index]
        if activation.kind == RELU:
            grad = relu_backward(activation_cache, grad)
        elif activation.kind == STATIC_MEDIAN:
            grad = static_median_backward(artifacts.table, activation.reach, activation_cache, grad)
        else:
            grads[f"layer{index}.omega"], grad = dynamic_median_backward(
                artifacts.table, layer.median, activation_cache, grad
            )
        grads[f"layer{index}.h"], grad = filter_backward(
            layer.bank, artifacts.shift, cache.filters[index], grad
        )
    return loss, grads


class GraphNeuralNetwork:
    """
    A network bound to its graph.

    Attributes:
        params (ModelParams): The trainable parameters.
        artifacts (GraphArtifacts): Shift operator and neighborhood table.

    Methods:
        `forward()`: Probabilities and cache for a batch.
        `backward()`: Loss and gradients from a forward cache.
        `predict()`: Probabilities only.
    """

    def __init__(self, params, artifacts):
        self.params = params
        self.artifacts = artifacts

    @classmethod
    def build(cls, graph, architecture, seed, direction=None):
        """Initializes a network for a graph; architecture.n_nodes must equal the graph size."""
        if architecture.n_nodes != graph.n_nodes:
            raise ShapeError(
                f"architecture is for {architecture.n_nodes} nodes, graph has {graph.n_nodes}"
            )
        artifacts = GraphArtifacts.from_graph(graph, architecture.activation, direction)
        params = ModelParams.initialize(architecture, seed)
        logger.debug(
            "built %s network: %d conv parameters, %d in total",
            architecture.activation.label,
            architecture.conv_parameters,
            params.n_parameters,
        )
        return cls(params, artifacts)

    @property
    def architecture(self):
        return self.params.architecture

    def forward(self, x):
        return model_forward(self.params, self.artifacts, x)

    def backward(self, cache, labels):
        return model_backward(self.params, self.artifacts, cache, labels)

    def predict(self, x):
        probs, _ = model_forward(self.params, self.artifacts, x)
        return probs
