"""
Synthetic diffusion datasets for source localization.

A sample is the state x(t) = W^t e_c of a diffusion started at a source node c, labeled with the
source. Sources are the highest-degree nodes of the graph.
"""

import logging

import numpy as np

from graphs.operators import adjacency, normalized_adjacency
from median_gnn.exceptions import GraphValidationError
from .datasets import Dataset

logger = logging.getLogger(__name__)

DIFFUSION_OPERATORS = ("normalized", "raw")


def top_degree_nodes(g, c):
    """
    Returns the c nodes of highest degree, ties broken toward smaller ids.

    Directed graphs rank nodes by in-degree plus out-degree.

    Args:
        g (Graph): The graph.
        c (int): Number of nodes.

    Returns:
        list[int]: Node ids, highest degree first.

    Raises:
        GraphValidationError: If c exceeds the node count.
    """
    if c > g.n_nodes:
        raise GraphValidationError(f"cannot pick {c} source nodes from {g.n_nodes} nodes")
    degrees = g.degrees()
    order = np.lexsort((np.arange(g.n_nodes), -degrees))
    return [int(node) for node in order[:c]]


def diffuse(w, source, t):
    """
    Computes x(t) = W^t e_source with t successive matrix-vector products.

    Args:
        w (ShiftMatrix): The diffusion operator.
        source (int): The source node.
        t (int): Number of steps, t >= 0.

    Returns:
        np.ndarray: The state of shape (N,).
    """
    if not 0 <= source < w.n:
        raise GraphValidationError(f"source node {source} is outside 0..{w.n - 1}")
    if t < 0:
        raise ValueError("diffusion time must be non-negative")
    state = np.zeros(w.n)
    state[source] = 1.0
    for _ in range(t):
        state = w.entries @ state
    return state


def diffusion_operator(g, kind="normalized"):
    """The operator diffusion runs with: the eigenvalue-normalized or the raw adjacency."""
    if kind not in DIFFUSION_OPERATORS:
        raise ValueError(f"diffusion operator must be one of {DIFFUSION_OPERATORS}, got {kind!r}")
    return normalized_adjacency(g) if kind == "normalized" else adjacency(g)


def generate_diffusion_dataset(g, classes, n, t_max, seed, t_min=0, operator="normalized"):
    """
    Draws n labeled diffusion states.

    Each sample picks its class uniformly among `classes` and its time uniformly in
    t_min..t_max from one seeded generator; the signal is the diffusion state of that source at
    that time. States are computed once per (source, time) pair.

    Args:
        g (Graph): The graph.
        classes (Sequence[int]): Source nodes; label k stands for classes[k].
        n (int): Number of samples.
        t_max (int): Largest diffusion time.
        seed (int): Seed of the draws.
        t_min (int): Smallest diffusion time.
        operator (str): "normalized" or "raw".

    Returns:
        Dataset: The samples, with class_map holding the source node ids.
    """
    if not classes:
        raise ValueError("at least one source class is required")
    if n < 1:
        raise ValueError("sample count must be positive")
    if not 0 <= t_min <= t_max:
        raise ValueError(f"need 0 <= t_min <= t_max, got {t_min} and {t_max}")

    w = diffusion_operator(g, operator)
    trajectories = np.empty((len(classes), t_max + 1, g.n_nodes))
    for label, source in enumerate(classes):
        state = diffuse(w, source, 0)
        trajectories[label, 0] = state
        for t in range(1, t_max + 1):
            state = w.entries @ state
            trajectories[label, t] = state

    rng = np.random.default_rng(seed)
    labels = rng.integers(0, len(classes), size=n)
    times = rng.integers(t_min, t_max + 1, size=n)
    logger.debug(
        "generated %d diffusion samples on %d nodes from sources %s, t in %d..%d",
        n,
        g.n_nodes,
        list(classes),
        t_min,
        t_max,
    )
    return Dataset(trajectories[labels, times], labels, tuple(str(node) for node in classes), seed)
