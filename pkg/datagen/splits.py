"""
Seeded stratified splits.
"""

import numpy as np
from sklearn.model_selection import train_test_split

from median_gnn.exceptions import SplitError


def split_sizes(n_samples, train_fraction):
    """
    Training and test sizes of a split: round(train_fraction * n) samples go to training.

    Raises:
        SplitError: If the fraction is outside (0, 1) or one side would be empty.
    """
    if not 0 < train_fraction < 1:
        raise SplitError(f"train fraction must lie in (0, 1), got {train_fraction}")
    n_train = int(np.floor(train_fraction * n_samples + 0.5))
    if n_train == 0 or n_train == n_samples:
        raise SplitError(
            f"splitting {n_samples} samples at {train_fraction} leaves "
            f"{n_train} training and {n_samples - n_train} test samples"
        )
    return n_train, n_samples - n_train


def stratified_indices(labels, train_fraction, seed):
    """
    Training and test indices of a stratified split.

    Sizes come from `split_sizes()`; scikit-learn allocates them per class, so every class is
    within one sample of exact proportion. Both index arrays come back shuffled.

    Args:
        labels (array_like): Sample labels.
        train_fraction (float): In (0, 1).
        seed (int): Shuffle seed.

    Returns:
        tuple[np.ndarray, np.ndarray]: Training and test indices.

    Raises:
        SplitError: If the sizes are degenerate, or a class is too small to appear on both
            sides.
    """
    labels = np.asarray(labels)
    n_train, n_test = split_sizes(labels.size, train_fraction)
    try:
        return train_test_split(
            np.arange(labels.size),
            train_size=n_train,
            test_size=n_test,
            stratify=labels,
            random_state=seed,
        )
    except ValueError as error:
        raise SplitError(f"cannot stratify {labels.size} samples: {error}") from error


def stratified_split(dataset, train_fraction, seed):
    """
    Splits a dataset into training and test sets with class balance preserved.

    Args:
        dataset (Dataset): The dataset.
        train_fraction (float): In (0, 1).
        seed (int): Shuffle seed.

    Returns:
        tuple[Dataset, Dataset]: Training and test sets, see `stratified_indices()`.
    """
    train_indices, test_indices = stratified_indices(dataset.labels, train_fraction, seed)
    return dataset.subset(train_indices), dataset.subset(test_indices)
