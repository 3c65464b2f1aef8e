"""
Generates the datasets of one experiment round.

Writes train.txt, test.txt and graph.edges to the output directory.
"""

from pathlib import Path

from django.core.management.base import BaseCommand, CommandError

from datagen.datasets import write_dataset
from graphs.edge_lists import write_edge_list
from median_gnn.exceptions import EXIT_USAGE
from median_gnn.mixins import EngineCommandMixin
from experiments.runner import prepare_round


class Command(EngineCommandMixin, BaseCommand):
    help = "Writes the training set, test set and graph of one round (seed = base seed + round)."

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
        out = Path(cfg.out)
        write_dataset(data.train, out / "train.txt")
        write_dataset(data.test, out / "test.txt")
        write_edge_list(data.graph, out / "graph.edges")
        self.stdout.write(
            f"{len(data.train)} training and {len(data.test)} test samples on "
            f"{data.graph.n_nodes} nodes written to {out}"
        )
        self.stdout.write(self.style.SUCCESS(f"dataset hash {data.dataset_hash}"))
