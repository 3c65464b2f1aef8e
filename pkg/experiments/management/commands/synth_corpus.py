"""
Writes a synthetic multi-author corpus for the authorship task.
"""

from django.core.management.base import BaseCommand, CommandError

from datagen.corpus import load_function_words, synthesize_corpus
from median_gnn.exceptions import EXIT_USAGE
from median_gnn.mixins import EngineCommandMixin


class Command(EngineCommandMixin, BaseCommand):
    help = "Generates authors that differ only in their function-word usage."

    def add_arguments(self, parser):
        parser.add_argument("--out", required=True, help="Corpus directory to create.")
        parser.add_argument("--authors", type=int, default=2, help="Number of authors.")
        parser.add_argument("--words", type=int, default=60_000, help="Words per author.")
        parser.add_argument("--seed", type=int, default=0, help="Seed of every draw.")
        parser.add_argument("--function-words", help="Function-word list to draw from.")

    def run(self, **options):
        if options["authors"] < 2 or options["words"] < 1:
            raise CommandError(
                "--authors must be at least 2 and --words positive", returncode=EXIT_USAGE
            )
        names = synthesize_corpus(
            options["out"],
            authors=options["authors"],
            words_per_author=options["words"],
            function_words=load_function_words(options.get("function_words")),
            seed=options["seed"],
        )
        listed = ", ".join(names)
        self.stdout.write(
            self.style.SUCCESS(f"{len(names)} authors written to {options['out']}: {listed}")
        )
