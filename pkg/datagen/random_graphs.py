"""
Seeded random graphs standing in for social networks: random geometric graphs and stochastic
block models, both undirected with unit weights. Isolated nodes are kept.
"""

import logging

import networkx as nx

from graphs.structures import Graph

logger = logging.getLogger(__name__)


def _from_networkx(nx_graph, n_nodes):
    edges = [(int(u), int(v), 1.0) for u, v in nx_graph.edges()]
    graph = Graph.from_edges(n_nodes, edges, directed=False)
    logger.debug("random graph with %d nodes and %d edges", n_nodes, len(edges))
    return graph


def random_geometric_graph(n_nodes, radius, seed):
    """
    Nodes uniform in the unit square, joined when closer than radius.

    Args:
        n_nodes (int): Number of nodes.
        radius (float): Connection distance.
        seed (int): Position seed.

    Returns:
        Graph: The graph.
    """
    return _from_networkx(nx.random_geometric_graph(n_nodes, radius, seed=seed), n_nodes)


def stochastic_block_graph(n_nodes, blocks, p_in, p_out, seed):
    """
    Stochastic block model with near-equal blocks.

    Args:
        n_nodes (int): Number of nodes.
        blocks (int): Number of blocks; sizes differ by at most one.
        p_in (float): Edge probability inside a block.
        p_out (float): Edge probability between blocks.
        seed (int): Edge seed.

    Returns:
        Graph: The graph.
    """
    sizes = [n_nodes // blocks + (1 if block < n_nodes % blocks else 0) for block in range(blocks)]
    probabilities = [
        [p_in if row == column else p_out for column in range(blocks)] for row in range(blocks)
    ]
    return _from_networkx(nx.stochastic_block_model(sizes, probabilities, seed=seed), n_nodes)
