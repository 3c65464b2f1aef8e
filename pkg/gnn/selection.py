"""
Order-statistic selection over hop neighborhoods.

For a neighborhood of m values the selected statistic has 0-based rank m // 2: the middle value
when m is odd and the upper median, the (m/2 + 1)-th smallest value, when m is even. Ties are
resolved toward the member with the smallest node id, so the selected index is deterministic.
"""

import numpy as np


def median_rank(m):
    """0-based rank of the median of m values (upper median for even m)."""
    return m // 2


def hop_median(values, table, hop):
    """
    Computes the hop-r median of every node for a stack of graph signals.

    Nodes with equal neighborhood sizes are processed together: their neighborhood values are
    gathered into one (..., nodes, m) window and the median is found with introselect
    (`np.partition`), never a full sort.

    Args:
        values (np.ndarray): Signals of shape (..., N).
        table (NeighborhoodTable): The neighborhood table of the graph.
        hop (int): The hop radius, at most table.max_hop.

    Returns:
        tuple[np.ndarray, np.ndarray]: The medians, shape (..., N), and the node id whose value
            was selected at every position, same shape.
    """
    medians = np.empty(values.shape, dtype=np.float64)
    selected = np.empty(values.shape, dtype=np.intp)
    for nodes, members in table.gather_groups[hop]:
        kth = median_rank(members.shape[1])
        window = values[..., members]
        median = np.partition(window, kth, axis=-1)[..., kth]
        # members rows are sorted, so the first match is the smallest node id
        position = np.argmax(window == median[..., None], axis=-1)
        medians[..., nodes] = median
        selected[..., nodes] = members[np.arange(len(nodes)), position]
    return medians, selected


def sorted_hop_median(values, table, hop):
    """
    Reference implementation of `hop_median()` that fully sorts every neighborhood.

    Slow; used to check the introselect path.
    """
    values = np.asarray(values, dtype=np.float64)
    flat = values.reshape(-1, values.shape[-1])
    medians = np.empty(flat.shape)
    for row, signal in enumerate(flat):
        for node in range(table.n_nodes):
            ordered = np.sort(signal[table.members[node][hop]])
            medians[row, node] = ordered[len(ordered) // 2]
    return medians.reshape(values.shape)
