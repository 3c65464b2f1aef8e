"""
Finite-difference tools for the gradient tests.
"""

import numpy as np

FD_STEP = 1e-6


def numerical_gradient(loss, array, step=FD_STEP):
    """
    Central differences of a scalar loss with respect to every entry of an array.

    The array is perturbed in place and restored, so `loss` can read it through any reference
    (a parameter object, a closure).
    """
    grad = np.zeros_like(array)
    for index in np.ndindex(array.shape):
        original = array[index]
        array[index] = original + step
        plus = loss()
        array[index] = original - step
        minus = loss()
        array[index] = original
        grad[index] = (plus - minus) / (2 * step)
    return grad


def relative_error(analytic, numeric, floor=1e-3):
    """||a - n|| / (||a|| + ||n||), with a floor on the denominator for vanishing gradients."""
    scale = max(np.linalg.norm(analytic) + np.linalg.norm(numeric), floor)
    return np.linalg.norm(analytic - numeric) / scale


def min_neighborhood_gap(values, table, max_hop):
    """
    Smallest distance between two values inside any neighborhood up to max_hop.

    Finite differences are only meaningful away from ties, where the selected median can switch.
    """
    flat = np.asarray(values).reshape(-1, table.n_nodes)
    gap = np.inf
    for signal in flat:
        for node in range(table.n_nodes):
            for hop in range(1, max_hop + 1):
                window = np.sort(signal[table.members[node][hop]])
                if window.size > 1:
                    gap = min(gap, float(np.min(np.diff(window))))
    return gap
