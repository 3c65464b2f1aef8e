"""
Trains one network on the data of one round.

Writes to the output directory:
    - model.json: the checkpoint, pointing at graph.edges
    - graph.edges: the graph the network was built on
    - train.txt / test.txt: the samples the network was fitted on and the test samples
    - report.csv / curves.csv: per-epoch metrics with and without wall time
"""

import logging
from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from datagen.datasets import write_dataset
from datagen.splits import stratified_split
from gnn.checkpoints import save_checkpoint
from gnn.model import GraphNeuralNetwork
from graphs.edge_lists import write_edge_list
from median_gnn.exceptions import EXIT_USAGE, SplitError
from median_gnn.mixins import EngineCommandMixin
from training.reports import write_train_report
from training.trainer import evaluate, train
from experiments.exports import emit_curves
from experiments.runner import prepare_round

logger = logging.getLogger(__name__)

GRAPH_FILE = "graph.edges"


class Command(EngineCommandMixin, BaseCommand):
    help = "Trains a single network and saves its checkpoint, datasets and training curves."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument(
            "--round", type=int, default=0, dest="round_index", help="0-based round index."
        )

    def run(self, **options):
        cfg = self.experiment_config(options)
        if options["round_index"] < 0:
            raise CommandError("--round must not be negative", returncode=EXIT_USAGE)
        data = prepare_round(cfg, options["round_index"])

        # train.txt holds exactly the fitted samples, so `eval` on it reproduces the final loss
        fitted, validation = data.train, None
        if cfg.validation_fraction > 0:
            try:
                fitted, validation = stratified_split(
                    data.train, 1.0 - cfg.validation_fraction, data.seed
                )
            except SplitError:
                logger.warning("training set too small for a validation split")

        architecture = cfg.architecture(cfg.activation, data.graph.n_nodes, data.train.n_classes)
        model = GraphNeuralNetwork.build(
            data.graph, architecture, data.seed, direction=cfg.neighborhood_direction
        )
        report = train(model, fitted, cfg.train_config(data.seed), validation=validation)
        test_loss, test_accuracy = evaluate(model, data.test)

        out = Path(cfg.out)
        write_edge_list(data.graph, out / GRAPH_FILE)
        write_dataset(fitted, out / "train.txt")
        write_dataset(data.test, out / "test.txt")
        graph_info = {
            "edge_list": GRAPH_FILE,
            "directed": data.graph.directed,
            "direction": cfg.neighborhood_direction,
            "dataset_hash": data.dataset_hash,
        }
        save_checkpoint(model.params, out / "model.json", graph_info=graph_info)
        write_train_report(report, out / "report.csv")
        emit_curves(report, out / "curves.csv")

        self.stdout.write(f"activation {architecture.activation.label}")
        self.stdout.write(f"conv parameters {architecture.conv_parameters}")
        self.stdout.write(f"final train loss {report.final_train_loss!r}")
        self.stdout.write(f"final train accuracy {report.final_train_accuracy!r}")
        self.stdout.write(f"test loss {test_loss!r}")
        self.stdout.write(self.style.SUCCESS(f"test accuracy {test_accuracy!r}"))
