"""
Graph shift operators: adjacency, binary GSO, spectral radius and the normalized adjacency.

Orientation convention: [W]_ij := w_ji, so the arc (j, i, w) lands in row i, column j and the
shift S x aggregates, at node i, the values of the nodes with arcs into i.
"""

import logging

import networkx as nx
import numpy as np
from django.conf import settings

from median_gnn.exceptions import (
    ConvergenceError,
    GraphValidationError,
    NoSpectralRadiusError,
)
from .structures import ShiftMatrix

logger = logging.getLogger(__name__)


def _check_size(g):
    if g.n_nodes > settings.MAX_NODES:
        raise GraphValidationError(
            f"graph has {g.n_nodes} nodes; dense shift matrices are limited to "
            f"{settings.MAX_NODES} (MAX_NODES)"
        )


def adjacency(g) -> ShiftMatrix:
    """
    Builds the weighted adjacency matrix with entry (i, j) = w_ji.

    Args:
        g (Graph): The graph.

    Returns:
        ShiftMatrix: The adjacency matrix.
    """
    _check_size(g)
    entries = np.zeros((g.n_nodes, g.n_nodes))
    for src, dst, weight in g.edges:
        entries[dst, src] = weight
    return ShiftMatrix(entries)


def binary_gso(g) -> ShiftMatrix:
    """
    Builds the 0/1 shift operator M with the adjacency's sparsity pattern (weights discarded).

    Row i of M marks the in-neighbors of i; its powers characterize exact hop distances.

    Args:
        g (Graph): The graph.

    Returns:
        ShiftMatrix: The binary operator.
    """
    _check_size(g)
    entries = np.zeros((g.n_nodes, g.n_nodes))
    for src, dst, _ in g.edges:
        entries[dst, src] = 1.0
    return ShiftMatrix(entries)


def spectral_radius(s, tol=None, max_iter=None, seed=None) -> float:
    """
    Estimates the largest eigenvalue modulus of a shift matrix by power iteration.

    The estimate at each step is the growth ratio ||S v|| / ||v|| of the normalized iterate, which
    converges to |lambda_max| even when -lambda_max is also an eigenvalue (bipartite graphs).
    Sign-uniform matrices (all entries >= 0 or all <= 0) whose support is acyclic are nilpotent
    and have radius 0. Other sign-uniform matrices are iterated with a small diagonal shift,
    which makes the Perron root strictly dominant on periodic directed graphs; the shift is
    subtracted from the result.

    Args:
        s (ShiftMatrix): The operator.
        tol (float): Relative change below which the estimate is accepted. Defaults to
            settings.SPECTRAL_TOL.
        max_iter (int): Iteration budget. Defaults to settings.SPECTRAL_MAX_ITER.
        seed (int): Seed of the random start vector. Defaults to settings.SPECTRAL_SEED.

    Returns:
        float: The spectral radius.

    Raises:
        NoSpectralRadiusError: If the matrix is zero.
        ConvergenceError: If the estimate has not converged after max_iter iterations.
    """
    tol = settings.SPECTRAL_TOL if tol is None else tol
    max_iter = settings.SPECTRAL_MAX_ITER if max_iter is None else max_iter
    seed = settings.SPECTRAL_SEED if seed is None else seed
    if tol <= 0:
        raise ValueError("tol must be positive")

    matrix = s.entries
    if not np.any(matrix):
        raise NoSpectralRadiusError("no spectral radius: the shift matrix is zero")

    shift = 0.0
    if np.all(matrix >= 0) or np.all(matrix <= 0):
        matrix = np.abs(matrix)
        if nx.is_directed_acyclic_graph(nx.from_numpy_array(matrix, create_using=nx.DiGraph)):
            # Acyclic support: the matrix is nilpotent.
            return 0.0
        shift = float(np.mean(matrix[matrix > 0]))
        matrix = matrix + shift * np.eye(s.n)

    rng = np.random.default_rng(seed)
    vector = rng.uniform(0.5, 1.5, size=s.n)
    vector /= np.linalg.norm(vector)

    estimate = 0.0
    for iteration in range(1, max_iter + 1):
        image = matrix @ vector
        growth = float(np.linalg.norm(image))
        if growth == 0.0:
            # Nilpotent operator: every eigenvalue is zero.
            return 0.0
        vector = image / growth
        if iteration > 1 and abs(growth - estimate) <= tol * growth:
            radius = growth - shift
            logger.debug("spectral radius %r after %d iterations", radius, iteration)
            return radius
        estimate = growth
    raise ConvergenceError(last_iterate=estimate - shift, iterations=max_iter)


def normalized_adjacency(g, tol=None) -> ShiftMatrix:
    """
    Scales the adjacency matrix by the inverse of its spectral radius.

    Args:
        g (Graph): A graph with at least one edge.
        tol (float): Power-iteration tolerance. Defaults to settings.SPECTRAL_TOL.

    Returns:
        ShiftMatrix: The adjacency matrix with spectral radius 1.

    Raises:
        NoSpectralRadiusError: If the graph has no edges or its adjacency is nilpotent.
        ConvergenceError: Propagated from `spectral_radius()`.
    """
    tol = settings.SPECTRAL_TOL if tol is None else tol
    shift = adjacency(g)
    radius = spectral_radius(shift, tol=tol)
    if radius <= tol:
        raise NoSpectralRadiusError(
            "no spectral radius: the adjacency matrix is nilpotent (acyclic graph)"
        )
    logger.debug("normalizing %d-node adjacency by %r", g.n_nodes, radius)
    return shift.scaled(1.0 / radius)
