"""
This module runs the comparison protocol: for every round k, one dataset is drawn with seed
base + k and every compared architecture is trained and tested on that same dataset.

The included pieces are:
    - RoundData: the datasets and graph of one round
    - RoundResult / SummaryRow: what a round and a whole comparison produce
    - load_source_graph / prepare_round: task-specific data preparation
    - run_architecture / run_rounds / summarize: training, testing and aggregation
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from django.utils import timezone

from datagen.corpus import TARGET_LABEL, authorship_dataset, load_corpus, load_function_words
from datagen.corpus import sample_authorship
from datagen.datasets import dataset_hash
from datagen.diffusion import generate_diffusion_dataset, top_degree_nodes
from datagen.random_graphs import random_geometric_graph, stochastic_block_graph
from datagen.splits import stratified_indices
from datagen.wan import WanSpec, build_wan
from gnn.model import GraphNeuralNetwork
from graphs.edge_lists import read_edge_list
from median_gnn.exceptions import MedianGNNError, RoundError
from training.trainer import evaluate, train
from .forms import AUTHORSHIP, EDGE_LIST, RANDOM_GEOMETRIC

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RoundData:
    """
    Everything the architectures of one round share.

    Attributes:
        round_index (int): 0-based round.
        seed (int): base seed + round index.
        graph (Graph): The graph the signals live on.
        train (Dataset): Training samples.
        test (Dataset): Test samples.
        dataset_hash (str): SHA-256 of the serialized dataset the round was cut from.
    """

    round_index: int
    seed: int
    graph: object
    train: object
    test: object
    dataset_hash: str


@dataclass(frozen=True)
class RoundResult:
    """
    Outcome of one architecture in one round.

    Attributes:
        architecture (str): Activation label.
        round_index (int): 0-based round.
        seed (int): Dataset and initialization seed.
        test_accuracy (float): Accuracy on the test set.
        final_train_loss (float): Loss of the trained model on its training set.
        parameters (int): Trainable parameters of the graph layers.
        dataset_hash (str): Hash of the round's dataset, equal across architectures.
        seconds (float): Wall-clock time; not part of equality.
        report (TrainReport): The training report; not part of equality.
    """

    architecture: str
    round_index: int
    seed: int
    test_accuracy: float
    final_train_loss: float
    parameters: int
    dataset_hash: str
    seconds: float = field(default=0.0, compare=False)
    report: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class SummaryRow:
    """
    Test accuracy of one architecture over all rounds.

    Attributes:
        architecture (str): Activation label.
        mean_accuracy (float): Mean test accuracy.
        std_accuracy (float): Sample standard deviation (0 for a single round).
        parameters (int): Trainable parameters of the graph layers.
        rounds (int): Number of rounds.
    """

    architecture: str
    mean_accuracy: float
    std_accuracy: float
    parameters: int
    rounds: int

    @property
    def accuracy_text(self):
        """Accuracy in percent as "mean ± std"."""
        return f"{100 * self.mean_accuracy:.2f} ± {100 * self.std_accuracy:.2f}"


def load_source_graph(cfg):
    """
    The graph of a source-localization experiment: an edge-list file or a random graph drawn
    from the base seed, shared by all rounds.
    """
    if cfg.graph_kind == EDGE_LIST:
        return read_edge_list(cfg.graph, directed=cfg.directed)
    if cfg.graph_kind == RANDOM_GEOMETRIC:
        return random_geometric_graph(cfg.nodes, cfg.radius, seed=cfg.seed)
    return stochastic_block_graph(cfg.nodes, cfg.blocks, cfg.p_in, cfg.p_out, seed=cfg.seed)


def wan_spec(cfg):
    words = load_function_words(cfg.function_words or None)
    return WanSpec(words, window=cfg.window, normalize=cfg.wan_normalize)


def _source_localization_round(cfg, round_index, seed, graph):
    sources = top_degree_nodes(graph, cfg.classes)
    dataset = generate_diffusion_dataset(
        graph,
        sources,
        cfg.train_samples + cfg.test_samples,
        cfg.t_max,
        seed,
        t_min=cfg.t_min,
        operator=cfg.diffusion_gso,
    )
    train_set = dataset.subset(np.arange(cfg.train_samples))
    test_set = dataset.subset(np.arange(cfg.train_samples, len(dataset)))
    return RoundData(round_index, seed, graph, train_set, test_set, dataset_hash(dataset))


def _authorship_round(cfg, round_index, seed, corpus, spec):
    excerpts, labels = sample_authorship(corpus, cfg.author, cfg.excerpt_length, seed)
    dataset = authorship_dataset(excerpts, labels, spec, cfg.author, seed)
    train_indices, test_indices = stratified_indices(labels, cfg.train_fraction, seed)
    target_texts = [excerpts[index] for index in train_indices if labels[index] == TARGET_LABEL]
    graph = build_wan(target_texts, spec)
    return RoundData(
        round_index,
        seed,
        graph,
        dataset.subset(train_indices),
        dataset.subset(test_indices),
        dataset_hash(dataset),
    )


def prepare_round(cfg, round_index, graph=None, corpus=None, spec=None):
    """
    Draws the data of one round with seed cfg.seed + round_index.

    Source localization diffuses from the cfg.classes highest-degree nodes and keeps the first
    cfg.train_samples samples for training. Authorship samples a balanced excerpt set, splits it
    stratified and builds the WAN from the target author's training excerpts only.

    Args:
        cfg (ExperimentConfig): The configuration.
        round_index (int): 0-based round.
        graph (Graph | None): Preloaded source-localization graph.
        corpus (dict | None): Preloaded corpus.
        spec (WanSpec | None): Preloaded WAN settings.

    Returns:
        RoundData: The round's graph and datasets.
    """
    seed = cfg.seed + round_index
    if cfg.task == AUTHORSHIP:
        corpus = load_corpus(cfg.corpus) if corpus is None else corpus
        spec = wan_spec(cfg) if spec is None else spec
        return _authorship_round(cfg, round_index, seed, corpus, spec)
    graph = load_source_graph(cfg) if graph is None else graph
    return _source_localization_round(cfg, round_index, seed, graph)


def run_architecture(cfg, data, activation):
    """
    Trains and tests one architecture on the data of a round.

    The network is initialized with the round seed, so architectures of the same round that
    share parameter shapes also share their initial values.

    Returns:
        RoundResult: The test accuracy and training outcome.
    """
    started = timezone.now()
    architecture = cfg.architecture(activation, data.graph.n_nodes, data.train.n_classes)
    model = GraphNeuralNetwork.build(
        data.graph, architecture, data.seed, direction=cfg.neighborhood_direction
    )
    report = train(model, data.train, cfg.train_config(data.seed))
    _, test_accuracy = evaluate(model, data.test)
    seconds = (timezone.now() - started).total_seconds()
    logger.info(
        "round %d %s: test accuracy %.4f, train loss %.4f (%.1fs)",
        data.round_index,
        activation.label,
        test_accuracy,
        report.final_train_loss,
        seconds,
    )
    return RoundResult(
        architecture=activation.label,
        round_index=data.round_index,
        seed=data.seed,
        test_accuracy=test_accuracy,
        final_train_loss=report.final_train_loss,
        parameters=architecture.conv_parameters,
        dataset_hash=data.dataset_hash,
        seconds=seconds,
        report=report,
    )


def run_rounds(cfg, on_result=None):
    """
    Runs every architecture of the configuration for cfg.rounds rounds.

    Args:
        cfg (ExperimentConfig): The configuration.
        on_result (Callable[[RoundResult], None] | None): Called after every training run.

    Returns:
        tuple[list[RoundResult], list[SummaryRow]]: Results in round order, architectures in
            configuration order, and one summary row per architecture.

    Raises:
        RoundError: Wrapping any engine error or rejected parameter value, with the index of
            the round it happened in; parameter errors keep exit code 1.
    """
    graph = corpus = spec = None
    results = []
    for round_index in range(cfg.rounds):
        try:
            if cfg.task == AUTHORSHIP:
                corpus = load_corpus(cfg.corpus) if corpus is None else corpus
                spec = wan_spec(cfg) if spec is None else spec
            else:
                graph = load_source_graph(cfg) if graph is None else graph
            data = prepare_round(cfg, round_index, graph=graph, corpus=corpus, spec=spec)
            for activation in cfg.architectures:
                result = run_architecture(cfg, data, activation)
                results.append(result)
                if on_result is not None:
                    on_result(result)
        except (MedianGNNError, ValueError) as error:
            raise RoundError(round_index, error) from error
    return results, summarize(results)


def summarize(results):
    """
    Aggregates results per architecture, in order of first appearance.

    Returns:
        list[SummaryRow]: Mean and sample standard deviation of the test accuracy.
    """
    grouped = {}
    for result in results:
        grouped.setdefault(result.architecture, []).append(result)
    rows = []
    for architecture, group in grouped.items():
        accuracies = np.array([result.test_accuracy for result in group])
        std = float(np.std(accuracies, ddof=1)) if accuracies.size > 1 else 0.0
        rows.append(
            SummaryRow(
                architecture=architecture,
                mean_accuracy=float(np.mean(accuracies)),
                std_accuracy=std,
                parameters=group[0].parameters,
                rounds=len(group),
            )
        )
    return rows
