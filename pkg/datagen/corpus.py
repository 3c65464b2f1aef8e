"""
This module contains the authorship-attribution inputs: text corpora, function-word lists,
excerpts and the labeled excerpt datasets, plus a generator of synthetic corpora.

Corpus layout on disk: one subdirectory per author holding plain UTF-8 text files. An author's
files are read in name order and concatenated into one token stream.
"""

import logging
from pathlib import Path

import numpy as np

from median_gnn.exceptions import CorpusError
from median_gnn.files import atomic_write
from .datasets import Dataset
from .wan import excerpt_matrix, tokenize

logger = logging.getLogger(__name__)

DEFAULT_FUNCTION_WORDS = Path(__file__).resolve().parent / "resources" / "function_words.txt"

OTHER_LABEL = 0
TARGET_LABEL = 1

SYLLABLES = [c + v for c in "bcdfghjklmnprstvz" for v in "aeiou"]


def parse_function_words(text):
    """Function words of a list text: one per line, '#' comments and blank lines skipped."""
    words = []
    for line in text.splitlines():
        word = line.strip().lower()
        if word and not word.startswith("#"):
            words.append(word)
    if not words:
        raise CorpusError("the function-word list is empty")
    return tuple(words)


def load_function_words(path=None):
    """
    Reads a function-word list.

    Args:
        path (str | Path | None): The list file; the bundled English list when None.

    Returns:
        tuple[str, ...]: The words in file order.
    """
    path = DEFAULT_FUNCTION_WORDS if path is None else Path(path)
    try:
        return parse_function_words(path.read_text(encoding="utf-8"))
    except OSError as error:
        raise CorpusError(f"cannot read function words {path}: {error}") from error


def load_corpus(directory):
    """
    Reads a corpus directory.

    Args:
        directory (str | Path): Directory with one subdirectory per author.

    Returns:
        dict[str, list[str]]: Token stream of every author, authors in name order.

    Raises:
        CorpusError: If the directory is missing, has no author directories or an author has no
            words.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise CorpusError(f"corpus directory {directory} does not exist")
    corpus = {}
    for author_dir in sorted(path for path in directory.iterdir() if path.is_dir()):
        tokens = []
        for text_file in sorted(path for path in author_dir.iterdir() if path.is_file()):
            try:
                tokens.extend(tokenize(text_file.read_text(encoding="utf-8")))
            except (OSError, UnicodeDecodeError) as error:
                raise CorpusError(f"cannot read {text_file}: {error}") from error
        if not tokens:
            raise CorpusError(f"author {author_dir.name} has no words")
        corpus[author_dir.name] = tokens
    if not corpus:
        raise CorpusError(f"corpus directory {directory} has no author subdirectories")
    logger.info(
        "loaded corpus of %d authors (%d words) from %s",
        len(corpus),
        sum(len(tokens) for tokens in corpus.values()),
        directory,
    )
    return corpus


def split_excerpts(tokens, length):
    """Disjoint consecutive excerpts of exactly `length` tokens; a shorter tail is dropped."""
    if length < 1:
        raise ValueError(f"excerpt length must be positive, got {length}")
    starts = range(0, len(tokens) - length + 1, length)
    return [tuple(tokens[start : start + length]) for start in starts]


def sample_authorship(corpus, author, excerpt_length, seed):
    """
    Draws the balanced excerpt set of a one-author-versus-rest problem.

    Every excerpt of the target author is a positive sample. As many negatives are drawn, each
    from an author chosen uniformly among the other authors that still have unused excerpts.

    Args:
        corpus (dict[str, list[str]]): Token streams by author.
        author (str): The target author.
        excerpt_length (int): Tokens per excerpt.
        seed (int): Seed of the negative draws.

    Returns:
        tuple[list[tuple[str, ...]], np.ndarray]: Excerpts and their labels (1 for the target
            author, 0 for the others).

    Raises:
        CorpusError: If the author is unknown, has fewer than two excerpts or the other authors
            do not have enough excerpts.
    """
    if author not in corpus:
        raise CorpusError(f"unknown author {author!r}; corpus has {', '.join(corpus)}")
    positives = split_excerpts(corpus[author], excerpt_length)
    if len(positives) < 2:
        raise CorpusError(f"author {author} has fewer than two {excerpt_length}-word excerpts")
    pools = {
        other: split_excerpts(tokens, excerpt_length)
        for other, tokens in corpus.items()
        if other != author
    }
    if sum(len(pool) for pool in pools.values()) < len(positives):
        raise CorpusError(
            f"the other authors have fewer than {len(positives)} excerpts to draw negatives from"
        )

    rng = np.random.default_rng(seed)
    orders = {other: list(rng.permutation(len(pool))) for other, pool in pools.items()}
    negatives = []
    while len(negatives) < len(positives):
        available = [other for other in pools if orders[other]]
        other = available[int(rng.integers(len(available)))]
        negatives.append(pools[other][orders[other].pop()])

    labels = np.array([TARGET_LABEL] * len(positives) + [OTHER_LABEL] * len(negatives))
    return positives + negatives, labels


def authorship_dataset(excerpts, labels, spec, author, seed=0):
    """
    Featurizes labeled excerpts.

    Returns:
        Dataset: Function-word frequencies as signals, class_map ("other", author).
    """
    signals = excerpt_matrix(excerpts, spec)
    return Dataset(signals, labels, ("other", author), seed)


def _content_words(rng, count, exclude):
    words = set()
    while len(words) < count:
        syllables = rng.choice(SYLLABLES, size=int(rng.integers(2, 4)))
        word = "".join(syllables)
        if word not in exclude:
            words.add(word)
    return sorted(words)


def synthesize_corpus(
    directory,
    authors=2,
    words_per_author=60_000,
    function_words=None,
    seed=0,
    function_share=0.45,
    concentration=0.5,
    files_per_author=3,
    vocabulary=2_000,
):
    """
    Writes a synthetic corpus whose authors differ only in function-word usage.

    Every author draws its function-word distribution from a symmetric Dirichlet distribution;
    content words come from one shared made-up vocabulary. Each token is a function word with
    probability `function_share`.

    Args:
        directory (str | Path): Output directory; one `author_<k>` subdirectory per author.
        authors (int): Number of authors, at least 2.
        words_per_author (int): Tokens written per author.
        function_words (Sequence[str] | None): Function words; the bundled list when None.
        seed (int): Seed of every draw.
        function_share (float): Probability that a token is a function word.
        concentration (float): Dirichlet concentration; smaller values give more distinct authors.
        files_per_author (int): Files the tokens of one author are spread over.
        vocabulary (int): Number of content words.

    Returns:
        list[str]: The author names written.
    """
    if authors < 2:
        raise CorpusError("a corpus needs at least two authors")
    if not 0 < function_share < 1:
        raise ValueError("function_share must lie in (0, 1)")
    function_words = list(load_function_words() if function_words is None else function_words)
    rng = np.random.default_rng(seed)
    content = _content_words(rng, vocabulary, set(function_words))
    directory = Path(directory)

    names = [f"author_{index + 1:02d}" for index in range(authors)]
    for name in names:
        usage = rng.dirichlet(np.full(len(function_words), concentration))
        is_function = rng.random(words_per_author) < function_share
        picks_function = rng.choice(len(function_words), size=words_per_author, p=usage)
        picks_content = rng.integers(len(content), size=words_per_author)
        tokens = [
            function_words[f] if flag else content[c]
            for flag, f, c in zip(is_function, picks_function, picks_content)
        ]
        bounds = np.linspace(0, words_per_author, files_per_author + 1).astype(int)
        for part in range(files_per_author):
            chunk = tokens[bounds[part] : bounds[part + 1]]
            lines = [" ".join(chunk[start : start + 12]) for start in range(0, len(chunk), 12)]
            atomic_write(directory / name / f"part_{part + 1:02d}.txt", "\n".join(lines) + "\n")
    logger.info("wrote synthetic corpus of %d authors to %s", authors, directory)
    return names
