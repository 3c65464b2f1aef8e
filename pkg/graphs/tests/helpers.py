"""
Small graphs shared by the test suites of several apps.
"""

import networkx as nx
import numpy as np

from graphs.structures import Graph


def path_graph(n=3):
    """Undirected path 0-1-...-(n-1) with unit weights."""
    return Graph.from_edges(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def cycle_graph(n=5):
    """Undirected cycle with unit weights."""
    return Graph.from_edges(n, [(i, (i + 1) % n, 1.0) for i in range(n)])


def star_graph(leaves=3):
    """Undirected star with center 0."""
    return Graph.from_edges(leaves + 1, [(0, leaf, 1.0) for leaf in range(1, leaves + 1)])


def random_graph(n, p, seed, directed=False):
    """Erdos-Renyi graph with random positive weights."""
    rng = np.random.default_rng(seed)
    nx_graph = nx.gnp_random_graph(n, p, seed=int(seed), directed=directed)
    edges = [(u, v, float(rng.uniform(0.5, 2.0))) for u, v in nx_graph.edges()]
    return Graph.from_edges(n, edges, directed=directed)


def to_networkx(g, direction="in"):
    """
    networkx DiGraph whose successors of i are the 1-hop neighbors of i for the direction.
    """
    nx_graph = nx.DiGraph()
    nx_graph.add_nodes_from(range(g.n_nodes))
    for src, dst, _ in g.edges:
        if direction == "in":
            nx_graph.add_edge(dst, src)
        else:
            nx_graph.add_edge(src, dst)
    return nx_graph
