"""
Evaluates a saved checkpoint on a dataset file.
"""

from pathlib import Path

from django.core.management.base import BaseCommand

from datagen.datasets import read_dataset
from gnn.checkpoints import load_checkpoint
from gnn.model import GraphArtifacts, GraphNeuralNetwork
from graphs.edge_lists import read_edge_list
from median_gnn.exceptions import DataError, LabelError, ShapeError
from median_gnn.mixins import EngineCommandMixin
from training.trainer import evaluate


class Command(EngineCommandMixin, BaseCommand):
    help = "Prints the loss and accuracy of a checkpoint on a dataset."

    def add_arguments(self, parser):
        parser.add_argument("--checkpoint", required=True, help="model.json written by train.")
        parser.add_argument("--dataset", required=True, help="Dataset file to evaluate on.")
        parser.add_argument(
            "--graph", help="Edge-list file; defaults to the graph named in the checkpoint."
        )

    def run(self, **options):
        params, graph_info = load_checkpoint(options["checkpoint"])
        architecture = params.architecture

        graph_path = options["graph"]
        if graph_path is None:
            if not graph_info.get("edge_list"):
                raise DataError("the checkpoint names no graph file; pass --graph")
            graph_path = Path(options["checkpoint"]).parent / graph_info["edge_list"]
        graph = read_edge_list(graph_path, directed=graph_info.get("directed", False))
        if graph.n_nodes != architecture.n_nodes:
            raise ShapeError(
                f"checkpoint is for {architecture.n_nodes} nodes, graph has {graph.n_nodes}"
            )

        dataset = read_dataset(options["dataset"])
        if dataset.n_nodes != architecture.n_nodes:
            raise ShapeError(
                f"checkpoint is for {architecture.n_nodes} nodes, dataset has {dataset.n_nodes}"
            )
        if dataset.n_classes > architecture.classes:
            raise LabelError(
                f"dataset has {dataset.n_classes} classes, checkpoint {architecture.classes}"
            )

        artifacts = GraphArtifacts.from_graph(
            graph, architecture.activation, graph_info.get("direction")
        )
        loss, accuracy = evaluate(GraphNeuralNetwork(params, artifacts), dataset)
        self.stdout.write(f"samples {len(dataset)}")
        self.stdout.write(f"loss {loss!r}")
        self.stdout.write(self.style.SUCCESS(f"accuracy {accuracy!r}"))
