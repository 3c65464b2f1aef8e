"""
This module contains the training loop and the evaluation metrics.

The included pieces are:
    - TrainConfig: epochs, batch size and ADAM hyperparameters
    - EpochRecord / TrainReport: what a training run records
    - train: seeded mini-batch training with ADAM
    - evaluate: mean cross-entropy and accuracy of any model with a `predict()` method
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from django.utils import timezone

from datagen.splits import stratified_split
from gnn.layers import cross_entropy
from median_gnn.exceptions import DivergenceError, SplitError
from .optimizers import AdamState, adam_step

logger = logging.getLogger(__name__)

EVALUATION_CHUNK = 500


@dataclass(frozen=True)
class TrainConfig:
    """
    Training hyperparameters.

    Attributes:
        epochs (int): Passes over the training set.
        batch_size (int): Samples per ADAM step; the last batch of an epoch may be smaller.
        learning_rate (float): ADAM step size.
        beta1 (float): ADAM first-moment decay.
        beta2 (float): ADAM second-moment decay.
        epsilon (float): ADAM denominator offset.
        validation_fraction (float): Share of the training set held out for the per-epoch
            evaluation when no validation set is passed; 0 evaluates on the training set.
        seed (int): Seed of the per-epoch shuffles and of the validation carve-out.
    """

    epochs: int = 40
    batch_size: int = 100
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    validation_fraction: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch size must be positive")
        if not 0 <= self.validation_fraction < 1:
            raise ValueError("validation fraction must lie in [0, 1)")


@dataclass(frozen=True)
class EpochRecord:
    """
    Metrics of one epoch.

    Attributes:
        epoch (int): 1-based epoch index.
        train_loss (float): Mean mini-batch loss over the epoch.
        val_loss (float): Loss on the evaluation set after the epoch.
        val_acc (float): Accuracy on the evaluation set after the epoch.
        seconds (float): Wall-clock duration; not part of equality.
    """

    epoch: int
    train_loss: float
    val_loss: float
    val_acc: float
    seconds: float = field(default=0.0, compare=False)


@dataclass(frozen=True)
class TrainReport:
    """
    Outcome of a training run.

    Attributes:
        epochs (tuple[EpochRecord, ...]): Per-epoch metrics in order.
        final_train_loss (float): Loss of the final model on the whole training set.
        final_train_accuracy (float): Accuracy of the final model on the whole training set.
        evaluated_on (str): "validation" or "training".
        final_parameters (ModelParams): Snapshot of the trained parameters.
    """

    epochs: tuple
    final_train_loss: float
    final_train_accuracy: float
    evaluated_on: str = "training"
    final_parameters: object = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.epochs)

    @property
    def total_seconds(self):
        return sum(record.seconds for record in self.epochs)


def evaluate(model, dataset, chunk_size=EVALUATION_CHUNK):
    """
    Mean cross-entropy and accuracy of a model on a dataset.

    Any object with `predict(signals) -> probabilities` works. Samples are scored in fixed chunks
    so the result does not depend on memory limits or callers.

    Args:
        model: Object with a `predict()` method taking (samples, N) or (samples, 1, N) signals.
        dataset (Dataset): A non-empty dataset.
        chunk_size (int): Samples per prediction call.

    Returns:
        tuple[float, float]: Loss and the fraction of samples whose argmax matches the label.
    """
    if len(dataset) == 0:
        raise ValueError("cannot evaluate on an empty dataset")
    total_loss = 0.0
    correct = 0
    for start in range(0, len(dataset), chunk_size):
        signals = dataset.batch()[start : start + chunk_size]
        labels = dataset.labels[start : start + chunk_size]
        probs = np.asarray(model.predict(signals))
        loss, _ = cross_entropy(probs, labels)
        total_loss += loss * len(labels)
        correct += int(np.sum(np.argmax(probs, axis=1) == labels))
    return total_loss / len(dataset), correct / len(dataset)


def train(model, dataset, config, validation=None):
    """
    Trains a network with ADAM on shuffled mini-batches.

    The parameters are updated in place. When no validation set is given and
    config.validation_fraction > 0, a seeded stratified share of the training set is held out;
    with neither, the per-epoch evaluation runs on the training set itself.

    Args:
        model (GraphNeuralNetwork): The network; its parameters are trained in place.
        dataset (Dataset): Training samples.
        config (TrainConfig): Hyperparameters and seed.
        validation (Dataset | None): Per-epoch evaluation set.

    Returns:
        TrainReport: Per-epoch metrics and the final training-set metrics.

    Raises:
        DivergenceError: If a mini-batch loss is not finite.
        NonFiniteGradientError: If a gradient is not finite.
    """
    if len(dataset) == 0:
        raise ValueError("cannot train on an empty dataset")
    if validation is None and config.validation_fraction > 0:
        try:
            dataset, validation = stratified_split(
                dataset, 1.0 - config.validation_fraction, config.seed
            )
        except SplitError:
            logger.warning("dataset too small for a validation split; evaluating on training data")
    evaluation = dataset if validation is None else validation

    rng = np.random.default_rng(config.seed)
    params = model.params.arrays()
    state = AdamState.for_params(
        params,
        learning_rate=config.learning_rate,
        beta1=config.beta1,
        beta2=config.beta2,
        epsilon=config.epsilon,
    )
    signals = dataset.batch()
    records = []
    for epoch in range(1, config.epochs + 1):
        started = timezone.now()
        order = rng.permutation(len(dataset))
        running = 0.0
        for start in range(0, len(dataset), config.batch_size):
            indices = order[start : start + config.batch_size]
            _, cache = model.forward(signals[indices])
            loss, grads = model.backward(cache, dataset.labels[indices])
            if not np.isfinite(loss):
                raise DivergenceError(epoch)
            adam_step(state, params, grads)
            running += loss * len(indices)
        val_loss, val_acc = evaluate(model, evaluation)
        seconds = (timezone.now() - started).total_seconds()
        record = EpochRecord(epoch, running / len(dataset), val_loss, val_acc, seconds)
        records.append(record)
        logger.info(
            "epoch %d/%d: train loss %.4f, %s loss %.4f, accuracy %.4f (%.2fs)",
            epoch,
            config.epochs,
            record.train_loss,
            "validation" if validation is not None else "training",
            val_loss,
            val_acc,
            seconds,
        )

    final_loss, final_accuracy = evaluate(model, dataset)
    return TrainReport(
        epochs=tuple(records),
        final_train_loss=final_loss,
        final_train_accuracy=final_accuracy,
        evaluated_on="training" if validation is None else "validation",
        final_parameters=model.params.copy(),
    )
