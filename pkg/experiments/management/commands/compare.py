"""
Runs the comparison protocol: every architecture of the configuration trains on the same
dataset in each round, and the per-round results and the summary are written to the output
directory.
"""

from django.conf import settings
from django.core.management.base import BaseCommand

from median_gnn.exceptions import MedianGNNError
from median_gnn.mixins import EngineCommandMixin
from experiments.exports import write_outputs
from experiments.models import Experiment
from experiments.runner import run_rounds


class Command(EngineCommandMixin, BaseCommand):
    help = "Trains every architecture for several seeded rounds and writes results and summary."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument(
            "--architectures",
            help="Comma-separated activations to compare; overrides the configuration.",
        )
        parser.add_argument("--rounds", type=int, help="Number of rounds.")

    def run(self, **options):
        cfg = self.experiment_config(
            options, architectures=options.get("architectures"), rounds=options.get("rounds")
        )
        experiment = None
        if settings.RECORD_RUNS:
            experiment = Experiment.objects.create(
                task=cfg.task, config=cfg.as_json(), out_dir=cfg.out
            )

        try:
            results, summary = run_rounds(
                cfg, on_result=experiment.record if experiment is not None else None
            )
        except MedianGNNError as error:
            if experiment is not None:
                experiment.finish(error=str(error))
            raise
        write_outputs(cfg.out, results, summary)
        if experiment is not None:
            experiment.finish()

        self.stdout.write(f"{'architecture':<20} {'accuracy (%)':>16} {'parameters':>10}")
        for row in summary:
            self.stdout.write(
                f"{row.architecture:<20} {row.accuracy_text:>16} {row.parameters:>10}"
            )
        self.stdout.write(
            self.style.SUCCESS(f"{len(results)} training runs written to {cfg.out}")
        )
