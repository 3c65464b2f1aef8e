"""
This module contains the layers of the network with their hand-derived backward passes.

The included layers are:
    - filter bank: linear shift-invariant graph filters sum_k h_k S^k x
    - ReLU
    - static median: hop-r neighborhood median at every node
    - dynamic median: trainable combination omega^T z_i of the hop-0..R medians
    - softmax readout and cross-entropy loss

Signal batches are float64 arrays of shape (batch, features, nodes). Every forward function
optionally fills a `LayerCache`; the matching backward function reads it back and refuses a cache
that was produced by another layer or with other parameter values.
"""

from dataclasses import dataclass, field

import numpy as np

from median_gnn.exceptions import LabelError, NonFiniteSignalError, ShapeError, StaleCacheError
from .selection import hop_median

PROBABILITY_FLOOR = 1e-12


def as_signal_batch(x, n_nodes=None):
    """
    Validates a signal batch.

    Args:
        x (array_like): Values of shape (batch, features, nodes).
        n_nodes (int | None): Required node count.

    Returns:
        np.ndarray: The batch as float64.

    Raises:
        ShapeError: If the batch is not 3-dimensional or has the wrong node count.
        NonFiniteSignalError: If a value is NaN or infinite.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 3:
        raise ShapeError(f"signal batch must have shape (batch, features, nodes), got {x.shape}")
    if n_nodes is not None and x.shape[2] != n_nodes:
        raise ShapeError(f"signal batch has {x.shape[2]} nodes, the graph has {n_nodes}")
    if not np.all(np.isfinite(x)):
        raise NonFiniteSignalError("signal batch contains non-finite values")
    return x


def _uniform(rng, bound, shape):
    return rng.uniform(-bound, bound, size=shape)


@dataclass
class FilterBankParams:
    """
    Coefficients of a bank of graph filters.

    Attributes:
        h (np.ndarray): Taps of shape (f_out, f_in, K); h[g, f, k] weighs S^k applied to input
            feature f in output feature g.
    """

    h: np.ndarray

    def __post_init__(self):
        self.h = np.asarray(self.h, dtype=np.float64)
        if self.h.ndim != 3 or self.h.shape[2] < 1:
            raise ShapeError(f"filter taps must have shape (f_out, f_in, K), got {self.h.shape}")

    @property
    def f_out(self):
        return self.h.shape[0]

    @property
    def f_in(self):
        return self.h.shape[1]

    @property
    def taps(self):
        return self.h.shape[2]

    @property
    def n_parameters(self):
        return self.h.size

    @classmethod
    def initialize(cls, f_in, f_out, taps, rng):
        """Draws taps uniformly in +-sqrt(1 / fan_in), with fan_in = f_in * taps."""
        return cls(_uniform(rng, np.sqrt(1.0 / (f_in * taps)), (f_out, f_in, taps)))


@dataclass
class DynamicMedianParams:
    """
    Weights omega of a dynamic median activation, shared by every feature of the layer.

    Attributes:
        omega (np.ndarray): Vector of length R + 1; omega[r] weighs the hop-r median.
    """

    omega: np.ndarray

    def __post_init__(self):
        self.omega = np.asarray(self.omega, dtype=np.float64)
        if self.omega.ndim != 1 or self.omega.size < 1:
            raise ShapeError(f"omega must be a non-empty vector, got shape {self.omega.shape}")

    @property
    def reach(self):
        return self.omega.size - 1

    @property
    def n_parameters(self):
        return self.omega.size

    @classmethod
    def identity(cls, reach):
        """omega = (1, 0, ..., 0): the activation starts as the identity."""
        omega = np.zeros(reach + 1)
        omega[0] = 1.0
        return cls(omega)


@dataclass
class ReadoutParams:
    """
    Fully connected softmax layer over the concatenated features.

    Attributes:
        weight (np.ndarray): Shape (classes, in_dim) with in_dim = features * nodes.
        bias (np.ndarray): Shape (classes,).
    """

    weight: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        self.weight = np.asarray(self.weight, dtype=np.float64)
        self.bias = np.asarray(self.bias, dtype=np.float64)
        if self.weight.ndim != 2 or self.bias.shape != (self.weight.shape[0],):
            raise ShapeError(
                f"readout weight {self.weight.shape} and bias {self.bias.shape} do not match"
            )

    @property
    def classes(self):
        return self.weight.shape[0]

    @property
    def in_dim(self):
        return self.weight.shape[1]

    @property
    def n_parameters(self):
        return self.weight.size + self.bias.size

    @classmethod
    def initialize(cls, in_dim, classes, rng):
        """Draws weight and bias uniformly in +-sqrt(1 / in_dim)."""
        bound = np.sqrt(1.0 / in_dim)
        weight = _uniform(rng, bound, (classes, in_dim))
        bias = _uniform(rng, bound, (classes,))
        return cls(weight, bias)


@dataclass
class LayerCache:
    """
    Forward intermediates kept for one backward pass.

    Attributes:
        kind (str): The layer that filled the cache ("" while empty).
        snapshot (dict): Copies of the parameter arrays used in the forward pass.
        tensors (dict): The stored intermediates (signal powers, selections, median stacks,
            probabilities).
    """

    kind: str = ""
    snapshot: dict = field(default_factory=dict)
    tensors: dict = field(default_factory=dict)

    def store(self, kind, params=None, **tensors):
        self.kind = kind
        self.snapshot = {name: np.array(value, copy=True) for name, value in (params or {}).items()}
        self.tensors = tensors

    def fetch(self, kind, params=None):
        """
        Returns the stored tensors after checking that they belong to this layer and parameters.

        Raises:
            StaleCacheError: If the cache is empty, comes from another layer, or the parameters
                changed since the forward pass.
        """
        if not self.kind:
            raise StaleCacheError(f"{kind} backward called with an empty cache")
        if self.kind != kind:
            raise StaleCacheError(f"{kind} backward called with a {self.kind} cache")
        for name, value in (params or {}).items():
            stored = self.snapshot.get(name)
            if stored is None or stored.shape != np.shape(value) or not np.array_equal(
                stored, value
            ):
                raise StaleCacheError(f"{kind} parameter '{name}' changed since the forward pass")
        return self.tensors


def _check_grad(grad_out, shape, kind):
    grad_out = np.asarray(grad_out, dtype=np.float64)
    if grad_out.shape != tuple(shape):
        raise StaleCacheError(
            f"{kind} backward got a gradient of shape {grad_out.shape}, forward produced {shape}"
        )
    return grad_out


def _route(grad_out, selected):
    """
    Scatters grad_out[b, f, i] onto node selected[b, f, i] of the same (b, f) signal.

    np.bincount sums in index order, so the reduction order is fixed.
    """
    batch, features, n_nodes = grad_out.shape
    offsets = (np.arange(batch * features) * n_nodes)[:, None]
    flat = (selected.reshape(batch * features, n_nodes) + offsets).ravel()
    routed = np.bincount(flat, weights=grad_out.ravel(), minlength=batch * features * n_nodes)
    return routed.reshape(grad_out.shape)


# Filter bank


def filter_forward(p, s, x, cache=None):
    """
    Applies the filter bank: y[b, g] = sum_f sum_k h[g, f, k] S^k x[b, f].

    The powers S^k x are built by repeated shifting, K - 1 matrix products per batch, without
    forming S^k.

    Args:
        p (FilterBankParams): The taps.
        s (ShiftMatrix): The shift operator.
        x (array_like): Input batch of shape (B, f_in, N).
        cache (LayerCache | None): Filled with the signal powers when given.

    Returns:
        np.ndarray: Output batch of shape (B, f_out, N).
    """
    x = as_signal_batch(x, s.n)
    if x.shape[1] != p.f_in:
        raise ShapeError(f"filter bank expects {p.f_in} input features, got {x.shape[1]}")
    powers = np.empty((p.taps,) + x.shape)
    powers[0] = x
    for k in range(1, p.taps):
        powers[k] = powers[k - 1] @ s.entries.T
    y = np.einsum("gfk,kbfn->bgn", p.h, powers)
    if cache is not None:
        cache.store("filter", {"h": p.h}, powers=powers, shift=s.entries, shape=y.shape)
    return y


def filter_backward(p, s, cache, grad_out):
    """
    Backward pass of `filter_forward()`.

    Returns:
        tuple[np.ndarray, np.ndarray]: grad_h of shape (f_out, f_in, K) and grad_x of shape
            (B, f_in, N), where grad_x = sum_k (S^T)^k applied to the tap-weighted gradient.
    """
    tensors = cache.fetch("filter", {"h": p.h})
    if tensors["shift"] is not s.entries and not np.array_equal(tensors["shift"], s.entries):
        raise StaleCacheError("filter backward called with another shift operator")
    grad_out = _check_grad(grad_out, tensors["shape"], "filter")
    powers = tensors["powers"]

    grad_h = np.einsum("bgn,kbfn->gfk", grad_out, powers)
    weighted = np.einsum("gfk,bgn->kbfn", p.h, grad_out)
    # Horner: sum_k weighted[k] S^k in row-vector form
    grad_x = weighted[p.taps - 1]
    for k in range(p.taps - 2, -1, -1):
        grad_x = grad_x @ s.entries + weighted[k]
    return grad_h, grad_x


# ReLU


def relu_forward(x, cache=None):
    """Elementwise max(0, x)."""
    x = as_signal_batch(x)
    if cache is not None:
        cache.store("relu", mask=x > 0)
    return np.maximum(x, 0.0)


def relu_backward(cache, grad_out):
    """Masks the gradient with x > 0 (subgradient 0 at x = 0)."""
    mask = cache.fetch("relu")["mask"]
    grad_out = _check_grad(grad_out, mask.shape, "relu")
    return np.where(mask, grad_out, 0.0)


# Median activations


def _check_hop(hop, table, kind):
    if hop < 0 or hop > table.max_hop:
        raise ShapeError(
            f"{kind} hop {hop} is outside the neighborhood table range 0..{table.max_hop}"
        )


def static_median_forward(x, table, r, cache=None):
    """
    Replaces the value at every node with the median over its extended r-hop neighborhood.

    Even-sized neighborhoods take the upper median. Each (sample, feature) signal is handled
    independently over the same table.

    Args:
        x (array_like): Input batch of shape (B, F, N).
        table (NeighborhoodTable): Neighborhoods of the graph.
        r (int): Hop radius, at most table.max_hop; r = 0 is the identity.
        cache (LayerCache | None): Filled with the selected node per (b, f, i) when given.

    Returns:
        np.ndarray: Output batch of shape (B, F, N).
    """
    x = as_signal_batch(x, table.n_nodes)
    _check_hop(r, table, "static median")
    medians, selected = hop_median(x, table, r)
    if cache is not None:
        cache.store("static-median", {"r": r}, selected=selected)
    return medians


def static_median_backward(table, r, cache, grad_out):
    """
    Routes each upstream gradient entry to the node whose value was selected.

    Returns:
        np.ndarray: grad_x of shape (B, F, N).
    """
    selected = cache.fetch("static-median", {"r": r})["selected"]
    grad_out = _check_grad(grad_out, selected.shape, "static median")
    return _route(grad_out, selected)


def dynamic_median_forward(x, table, p, cache=None):
    """
    Computes omega^T z_i at every node, where [z_i]_r is the hop-r median at node i.

    Args:
        x (array_like): Input batch of shape (B, F, N).
        table (NeighborhoodTable): Neighborhoods of the graph, max_hop >= R.
        p (DynamicMedianParams): The weights omega.
        cache (LayerCache | None): Filled with the median stack and selections when given.

    Returns:
        np.ndarray: Output batch of shape (B, F, N).
    """
    x = as_signal_batch(x, table.n_nodes)
    _check_hop(p.reach, table, "dynamic median")
    stack = np.empty((p.reach + 1,) + x.shape)
    selected = np.empty((p.reach + 1,) + x.shape, dtype=np.intp)
    stack[0] = x
    selected[0] = np.arange(x.shape[2])
    for hop in range(1, p.reach + 1):
        stack[hop], selected[hop] = hop_median(x, table, hop)
    y = np.einsum("r,rbfn->bfn", p.omega, stack)
    if cache is not None:
        cache.store("dynamic-median", {"omega": p.omega}, stack=stack, selected=selected)
    return y


def dynamic_median_backward(table, p, cache, grad_out):
    """
    Backward pass of `dynamic_median_forward()`.

    Returns:
        tuple[np.ndarray, np.ndarray]: grad_omega of shape (R + 1,), exact since the output is
            linear in omega, and grad_x of shape (B, F, N).
    """
    tensors = cache.fetch("dynamic-median", {"omega": p.omega})
    stack, selected = tensors["stack"], tensors["selected"]
    grad_out = _check_grad(grad_out, stack.shape[1:], "dynamic median")

    grad_omega = np.einsum("bfn,rbfn->r", grad_out, stack)
    grad_x = p.omega[0] * grad_out
    for hop in range(1, p.reach + 1):
        grad_x = grad_x + _route(p.omega[hop] * grad_out, selected[hop])
    return grad_omega, grad_x


# Readout and loss


def softmax(logits):
    """Row-wise softmax with max subtraction."""
    shifted = logits - np.max(logits, axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / np.sum(exp, axis=1, keepdims=True)


def readout_forward(p, x, cache=None):
    """
    Flattens every sample to features * nodes values and applies the softmax layer.

    Args:
        p (ReadoutParams): Weight and bias.
        x (array_like): Input batch of shape (B, F, N) with F * N = p.in_dim.
        cache (LayerCache | None): Filled with the flattened input and probabilities when given.

    Returns:
        np.ndarray: Class probabilities of shape (B, classes).
    """
    x = as_signal_batch(x)
    flat = x.reshape(x.shape[0], -1)
    if flat.shape[1] != p.in_dim:
        raise ShapeError(
            f"readout expects {p.in_dim} inputs per sample, got {flat.shape[1]} "
            f"({x.shape[1]} features x {x.shape[2]} nodes)"
        )
    probs = softmax(flat @ p.weight.T + p.bias)
    if cache is not None:
        cache.store(
            "readout", {"weight": p.weight, "bias": p.bias}, flat=flat, shape=x.shape, probs=probs
        )
    return probs


def readout_backward(p, cache, grad_logits):
    """
    Backward pass of `readout_forward()` from the gradient with respect to the logits.

    Returns:
        tuple[np.ndarray, np.ndarray, np.ndarray]: grad_weight, grad_bias and grad_x of the
            input batch shape.
    """
    tensors = cache.fetch("readout", {"weight": p.weight, "bias": p.bias})
    flat = tensors["flat"]
    grad_logits = _check_grad(grad_logits, (flat.shape[0], p.classes), "readout")
    grad_weight = grad_logits.T @ flat
    grad_bias = grad_logits.sum(axis=0)
    grad_x = (grad_logits @ p.weight).reshape(tensors["shape"])
    return grad_weight, grad_bias, grad_x


def check_labels(labels, classes):
    """
    Validates class labels.

    Raises:
        LabelError: If a label is outside 0..classes-1.
    """
    labels = np.asarray(labels)
    if labels.ndim != 1 or not np.issubdtype(labels.dtype, np.integer):
        raise LabelError(f"labels must be a 1-D integer array, got {labels.dtype} {labels.shape}")
    if labels.size and (labels.min() < 0 or labels.max() >= classes):
        raise LabelError(f"labels must lie in 0..{classes - 1}, got {labels.min()}..{labels.max()}")
    return labels


def cross_entropy(probs, labels):
    """
    Mean cross-entropy of a probability batch.

    Args:
        probs (np.ndarray): Class probabilities of shape (B, C).
        labels (array_like): Integer labels of shape (B,).

    Returns:
        tuple[float, np.ndarray]: The loss, with probabilities clamped at 1e-12, and its gradient
            with respect to the logits, (probs - one_hot) / B.

    Raises:
        LabelError: If a label is outside 0..C-1.
    """
    probs = np.asarray(probs, dtype=np.float64)
    labels = check_labels(labels, probs.shape[1])
    if labels.shape[0] != probs.shape[0]:
        raise ShapeError(f"{labels.shape[0]} labels for {probs.shape[0]} samples")
    batch = probs.shape[0]
    rows = np.arange(batch)
    loss = float(-np.mean(np.log(np.maximum(probs[rows, labels], PROBABILITY_FLOOR))))
    grad_logits = probs.copy()
    grad_logits[rows, labels] -= 1.0
    return loss, grad_logits / batch
