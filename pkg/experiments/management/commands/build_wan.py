"""
Builds the word adjacency network of one author and writes it as an edge list.
"""

from pathlib import Path

from django.core.management.base import BaseCommand

from datagen.corpus import load_corpus
from datagen.wan import build_wan
from graphs.edge_lists import write_edge_list
from median_gnn.exceptions import CorpusError
from median_gnn.files import atomic_write
from median_gnn.mixins import EngineCommandMixin
from experiments.forms import AUTHORSHIP
from experiments.runner import wan_spec


class Command(EngineCommandMixin, BaseCommand):
    help = "Writes the WAN of an author's texts (wan.edges) and its node words (words.txt)."

    def add_arguments(self, parser):
        self.add_config_arguments(parser)
        parser.add_argument("--corpus", help="Corpus directory, one subdirectory per author.")
        parser.add_argument("--author", help="Author whose texts build the network.")
        parser.add_argument(
            "--function-words", help="Function-word list; the bundled English list by default."
        )
        parser.add_argument("--window", type=int, help="Co-appearance window in words.")
        parser.add_argument(
            "--normalize",
            action="store_true",
            default=None,
            help="Store outgoing shares instead of counts.",
        )

    def run(self, **options):
        cfg = self.experiment_config(
            options,
            task=AUTHORSHIP,
            corpus=options.get("corpus"),
            author=options.get("author"),
            function_words=options.get("function_words"),
            window=options.get("window"),
            wan_normalize=options.get("normalize"),
        )
        corpus = load_corpus(cfg.corpus)
        if cfg.author not in corpus:
            raise CorpusError(f"unknown author '{cfg.author}'")
        spec = wan_spec(cfg)
        graph = build_wan([corpus[cfg.author]], spec)

        out = Path(cfg.out)
        write_edge_list(graph, out / "wan.edges")
        atomic_write(out / "words.txt", "".join(f"{word}\n" for word in spec.function_words))
        self.stdout.write(
            self.style.SUCCESS(
                f"WAN of {cfg.author}: {graph.n_nodes} words, {graph.n_arcs} arcs written to {out}"
            )
        )
