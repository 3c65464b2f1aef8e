"""
Word adjacency networks (WANs) and function-word features.

A WAN is a directed graph over a list of function words: arc (u, v) counts how often function
word v follows function word u within a window of tokens. Excerpts are featurized as the
frequency of every function word, so one excerpt is a signal on the WAN of its candidate author.
"""

import logging
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np
from sklearn.feature_extraction.text import CountVectorizer

from graphs.structures import Graph
from median_gnn.exceptions import CorpusError, EmptyGraphError

logger = logging.getLogger(__name__)

WORD_PATTERN = re.compile(r"[^\W\d_]+")

analyze_words = CountVectorizer(
    lowercase=True, token_pattern=WORD_PATTERN.pattern
).build_analyzer()


def tokenize(text):
    """Lowercases a text and splits it into alphabetic words; digits and punctuation separate."""
    return analyze_words(text)


@dataclass(frozen=True)
class WanSpec:
    """
    How WANs and features are built.

    Attributes:
        function_words (tuple[str, ...]): Node i is function_words[i].
        window (int): A pair counts when v comes at most this many tokens after u.
        normalize (bool): Whether each node's outgoing weights are scaled to sum to 1.
    """

    function_words: tuple
    window: int = 10
    normalize: bool = False

    def __post_init__(self):
        words = tuple(self.function_words)
        object.__setattr__(self, "function_words", words)
        if not words:
            raise CorpusError("the function-word list is empty")
        duplicates = sorted(word for word, count in Counter(words).items() if count > 1)
        if duplicates:
            raise CorpusError(f"duplicate function words: {', '.join(duplicates)}")
        for word in words:
            if word != word.lower() or not WORD_PATTERN.fullmatch(word):
                raise CorpusError(f"function word {word!r} is not a lowercase alphabetic word")
        if self.window < 1:
            raise ValueError(f"window must be positive, got {self.window}")

    @property
    def n_words(self):
        return len(self.function_words)

    @property
    def index(self):
        """Node id of every function word."""
        return {word: node for node, word in enumerate(self.function_words)}


def _occurrences(tokens, index):
    """Positions and node ids of the function words of a token stream."""
    return [(position, index[token]) for position, token in enumerate(tokens) if token in index]


def wan_counts(texts, spec):
    """
    Counts ordered function-word pairs within the window.

    Every occurrence of u at position p pairs with every occurrence of v at position q when
    0 < q - p <= window and v != u. Texts are counted separately, so no pair spans two texts.

    Args:
        texts (Iterable[Sequence[str]]): Tokenized, lowercase texts.
        spec (WanSpec): Function words and window.

    Returns:
        tuple[Counter, int]: Pair counts keyed by (u, v) node ids, and the number of function-word
            occurrences seen.
    """
    index = spec.index
    counts = Counter()
    occurrences = 0
    for tokens in texts:
        found = _occurrences(tokens, index)
        occurrences += len(found)
        for start, (position, source) in enumerate(found):
            for later, target in found[start + 1 :]:
                if later - position > spec.window:
                    break
                if target != source:
                    counts[(source, target)] += 1
    return counts, occurrences


def build_wan(texts, spec):
    """
    Builds the directed WAN of a list of texts.

    Args:
        texts (Iterable[Sequence[str]]): Tokenized, lowercase texts.
        spec (WanSpec): Function words, window and normalization.

    Returns:
        Graph: Directed graph on spec.n_words nodes with co-appearance counts as weights, or
            per-node outgoing shares when spec.normalize is set.

    Raises:
        EmptyGraphError: If no function word occurs in the texts.
    """
    counts, occurrences = wan_counts(texts, spec)
    if occurrences == 0:
        raise EmptyGraphError("no function word occurs in the texts")

    totals = Counter()
    for (source, _), count in counts.items():
        totals[source] += count
    edges = []
    for (source, target), count in counts.items():
        weight = count / totals[source] if spec.normalize else float(count)
        edges.append((source, target, weight))
    graph = Graph.from_edges(spec.n_words, edges, directed=True)
    logger.debug(
        "WAN with %d nodes and %d arcs from %d function-word occurrences",
        graph.n_nodes,
        graph.n_arcs,
        occurrences,
    )
    return graph


def _pretokenized(tokens):
    return tokens


def excerpt_matrix(excerpts, spec):
    """
    Relative function-word frequencies of a list of excerpts.

    Args:
        excerpts (Sequence[Sequence[str]]): Tokenized excerpts.
        spec (WanSpec): Function words; column i counts function_words[i].

    Returns:
        np.ndarray: Row e, column i is count(function_words[i]) / len(excerpts[e]).

    Raises:
        CorpusError: If an excerpt is empty.
    """
    excerpts = [list(tokens) for tokens in excerpts]
    lengths = np.array([len(tokens) for tokens in excerpts], dtype=float)
    if np.any(lengths == 0):
        raise CorpusError("cannot featurize an empty excerpt")
    vectorizer = CountVectorizer(analyzer=_pretokenized, vocabulary=spec.function_words)
    counts = vectorizer.transform(excerpts).toarray()
    return counts.reshape(len(excerpts), spec.n_words) / lengths[:, np.newaxis]


def excerpt_features(tokens, spec):
    """Relative frequency of every function word in one excerpt, see `excerpt_matrix()`."""
    return excerpt_matrix([tokens], spec)[0]
