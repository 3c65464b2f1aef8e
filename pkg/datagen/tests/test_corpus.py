"""
This module contains tests for corpora, excerpts and the authorship datasets.
"""

import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase

from datagen.corpus import (
    authorship_dataset,
    load_corpus,
    load_function_words,
    parse_function_words,
    sample_authorship,
    split_excerpts,
    synthesize_corpus,
)
from datagen.wan import WanSpec
from median_gnn.exceptions import CorpusError


class FunctionWordTests(SimpleTestCase):
    """
    Tests for the function-word lists
    """

    def test_bundled_list(self):
        """
        Test that the bundled list is a valid WAN vocabulary of at least 193 words.
        """
        words = load_function_words()
        self.assertGreaterEqual(len(words), 193)
        self.assertIn("the", words)
        self.assertEqual(WanSpec(words).n_words, len(words))

    def test_comments_and_blank_lines(self):
        """
        Test that comments and blank lines are skipped and words lowercased.
        """
        self.assertEqual(parse_function_words("# list\nThe\n\n and \n"), ("the", "and"))

    def test_missing_or_empty(self):
        """
        Test that missing files and empty lists are corpus errors.
        """
        with self.assertRaises(CorpusError):
            parse_function_words("# nothing\n")
        with self.assertRaises(CorpusError):
            load_function_words("/nonexistent/words.txt")


class CorpusTests(SimpleTestCase):
    """
    Tests for synthesize_corpus, load_corpus and the excerpt sampling
    """

    def setUp(self):
        """
        Setup
        """
        self.directory = tempfile.TemporaryDirectory()
        self.addCleanup(self.directory.cleanup)
        self.root = Path(self.directory.name)
        self.names = synthesize_corpus(self.root / "corpus", authors=3, words_per_author=3_000)
        self.corpus = load_corpus(self.root / "corpus")

    def test_layout(self):
        """
        Test one directory per author, spread over files, with every word read back.
        """
        self.assertEqual(self.names, ["author_01", "author_02", "author_03"])
        self.assertEqual(list(self.corpus), self.names)
        self.assertEqual(len(list((self.root / "corpus" / "author_01").iterdir())), 3)
        for tokens in self.corpus.values():
            self.assertEqual(len(tokens), 3_000)

    def test_deterministic(self):
        """
        Test that the same seed writes identical texts.
        """
        synthesize_corpus(self.root / "again", authors=3, words_per_author=3_000)
        for name in self.names:
            for part in (self.root / "corpus" / name).iterdir():
                again = self.root / "again" / name / part.name
                self.assertEqual(part.read_bytes(), again.read_bytes())

    def test_authors_differ_in_function_words(self):
        """
        Test that the authors' function-word frequencies differ.
        """
        spec = WanSpec(load_function_words())
        excerpts, labels = sample_authorship(self.corpus, "author_01", 1_000, seed=0)
        dataset = authorship_dataset(excerpts, labels, spec, "author_01")
        target = dataset.signals[dataset.labels == 1].mean(axis=0)
        other = dataset.signals[dataset.labels == 0].mean(axis=0)
        self.assertGreater(np.abs(target - other).sum(), 0.1)
        self.assertEqual(dataset.class_map, ("other", "author_01"))

    def test_split_excerpts(self):
        """
        Test disjoint full-length excerpts with the tail dropped.
        """
        excerpts = split_excerpts(list("abcdefg"), 3)
        self.assertEqual(excerpts, [tuple("abc"), tuple("def")])
        with self.assertRaises(ValueError):
            split_excerpts(["a"], 0)

    def test_balanced_negatives(self):
        """
        Test as many negatives as positives, none from the target and none repeated.
        """
        excerpts, labels = sample_authorship(self.corpus, "author_02", 500, seed=3)
        positives = set(split_excerpts(self.corpus["author_02"], 500))
        self.assertEqual(int(labels.sum()), 6)
        self.assertEqual(len(labels), 12)
        negatives = [excerpt for excerpt, label in zip(excerpts, labels) if label == 0]
        self.assertEqual(len(set(negatives)), 6)
        self.assertFalse(positives & set(negatives))
        again, _ = sample_authorship(self.corpus, "author_02", 500, seed=3)
        self.assertEqual(again, excerpts)

    def test_sampling_errors(self):
        """
        Test unknown authors, too few target excerpts and too few negatives.
        """
        with self.assertRaises(CorpusError):
            sample_authorship(self.corpus, "nobody", 500, seed=0)
        with self.assertRaises(CorpusError):
            sample_authorship(self.corpus, "author_01", 2_000, seed=0)
        lopsided = {"a": ["x"] * 4_000, "b": ["y"] * 1_000}
        with self.assertRaises(CorpusError):
            sample_authorship(lopsided, "a", 1_000, seed=0)

    def test_bad_corpus_directories(self):
        """
        Test missing directories, directories without authors and authors without words.
        """
        with self.assertRaises(CorpusError):
            load_corpus(self.root / "missing")
        (self.root / "flat").mkdir()
        with self.assertRaises(CorpusError):
            load_corpus(self.root / "flat")
        (self.root / "flat" / "silent").mkdir()
        (self.root / "flat" / "silent" / "text.txt").write_text("1 2 3", encoding="utf-8")
        with self.assertRaises(CorpusError):
            load_corpus(self.root / "flat")
