"""
Exact and extended hop neighborhoods.

Neighborhoods use shortest-path distance: node j is in the exact r-hop set of i when the shortest
path between them has exactly r arcs. On directed graphs the `direction` switch chooses which
paths count:
    - "in": paths from j into i, the direction in which the shift S x aggregates (default)
    - "out": paths from i out to j

Distances come from one breadth-first sweep per source (scipy's csgraph with unit weights and a
hop limit), never from repeated matrix powers.
"""

import logging

import numpy as np
from django.conf import settings
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import dijkstra

from .structures import NeighborhoodTable

logger = logging.getLogger(__name__)

DIRECTIONS = ("in", "out")


def resolve_direction(direction):
    direction = settings.NEIGHBORHOOD_DIRECTION if direction is None else direction
    if direction not in DIRECTIONS:
        raise ValueError(f"neighborhood direction must be one of {DIRECTIONS}, got {direction!r}")
    return direction


def _reachability_graph(g, direction):
    """
    Sparse 0/1 matrix whose row i lists the 1-hop neighbors of i for the given direction.
    """
    if g.n_arcs == 0:
        return csr_matrix((g.n_nodes, g.n_nodes))
    src = np.array([edge[0] for edge in g.edges])
    dst = np.array([edge[1] for edge in g.edges])
    rows, cols = (dst, src) if direction == "in" else (src, dst)
    return csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n_nodes, g.n_nodes))


def hop_distances(g, max_hop, sources=None, direction=None) -> np.ndarray:
    """
    Computes hop distances up to max_hop with a breadth-first sweep.

    Args:
        g (Graph): The graph.
        max_hop (int): Distances beyond this are reported as infinity.
        sources (int | Sequence[int] | None): Source nodes; all nodes when None.
        direction (str): "in" or "out". Defaults to settings.NEIGHBORHOOD_DIRECTION.

    Returns:
        np.ndarray: Distances of shape (len(sources), n_nodes), or (n_nodes,) for a single int.
    """
    direction = resolve_direction(direction)
    if max_hop < 0:
        raise ValueError("hop count must be non-negative")
    if g.n_nodes == 0:
        return np.zeros((0, 0))
    indices = np.arange(g.n_nodes) if sources is None else sources
    return dijkstra(
        _reachability_graph(g, direction),
        directed=True,
        indices=indices,
        unweighted=True,
        limit=max_hop,
    )


def exact_hop_set(g, i, r, direction=None) -> frozenset:
    """
    Returns the nodes at shortest-path distance exactly r from node i.

    Args:
        g (Graph): The graph.
        i (int): The center node.
        r (int): The hop count; r = 0 returns {i}.
        direction (str): "in" or "out". Defaults to settings.NEIGHBORHOOD_DIRECTION.

    Returns:
        frozenset[int]: The exact r-hop set (empty when nothing is exactly r hops away).
    """
    distances = hop_distances(g, r, sources=int(i), direction=direction)
    return frozenset(int(j) for j in np.flatnonzero(distances == r))


def extended_neighborhood(g, i, r, direction=None) -> frozenset:
    """
    Returns the union of the exact k-hop sets of node i for k = 0..r.

    Args:
        g (Graph): The graph.
        i (int): The center node.
        r (int): The hop radius.
        direction (str): "in" or "out". Defaults to settings.NEIGHBORHOOD_DIRECTION.

    Returns:
        frozenset[int]: The extended r-hop neighborhood; always contains i.
    """
    distances = hop_distances(g, r, sources=int(i), direction=direction)
    return frozenset(int(j) for j in np.flatnonzero(distances <= r))


def build_neighborhood_table(g, max_hop, direction=None) -> NeighborhoodTable:
    """
    Precomputes the extended neighborhoods of every node for every hop up to max_hop.

    One multi-source sweep produces all distances; members[i][r] is then the sorted list of the
    nodes within r hops of i.

    Args:
        g (Graph): The graph.
        max_hop (int): Largest hop radius R >= 0.
        direction (str): "in" or "out". Defaults to settings.NEIGHBORHOOD_DIRECTION.

    Returns:
        NeighborhoodTable: The table.
    """
    if max_hop < 0:
        raise ValueError("max_hop must be non-negative")
    distances = hop_distances(g, max_hop, direction=direction)
    members = [
        [np.flatnonzero(distances[node] <= hop) for hop in range(max_hop + 1)]
        for node in range(g.n_nodes)
    ]
    table = NeighborhoodTable.from_members(members, max_hop)
    if g.n_nodes:
        logger.debug(
            "neighborhood table for %d nodes, R=%d, mean sizes %s",
            g.n_nodes,
            max_hop,
            np.round(table.sizes.mean(axis=0), 2).tolist(),
        )
    return table
