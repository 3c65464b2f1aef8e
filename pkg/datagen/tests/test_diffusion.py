"""
This module contains tests for the diffusion datasets and the random graph generators.
"""

import numpy as np
from django.test import SimpleTestCase

from datagen.datasets import format_dataset
from datagen.diffusion import diffuse, generate_diffusion_dataset, top_degree_nodes
from datagen.random_graphs import random_geometric_graph, stochastic_block_graph
from graphs.operators import adjacency, normalized_adjacency
from graphs.structures import Graph
from graphs.tests.helpers import cycle_graph, path_graph, random_graph, star_graph
from median_gnn.exceptions import GraphValidationError


class TopDegreeNodesTests(SimpleTestCase):
    """
    Tests for top_degree_nodes
    """

    def test_star_center(self):
        """
        Test that the center of a star has the highest degree.
        """
        self.assertEqual(top_degree_nodes(star_graph(3), 1), [0])

    def test_path_middle(self):
        """
        Test that the middle of a 3-node path has the highest degree.
        """
        self.assertEqual(top_degree_nodes(path_graph(3), 1), [1])

    def test_ties_prefer_small_ids(self):
        """
        Test that equal degrees are broken toward smaller node ids.
        """
        self.assertEqual(top_degree_nodes(cycle_graph(3), 2), [0, 1])

    def test_directed_degree(self):
        """
        Test that directed graphs rank by in-degree plus out-degree.
        """
        graph = Graph.from_edges(4, [(0, 3, 1.0), (1, 3, 1.0), (3, 2, 1.0)], directed=True)
        self.assertEqual(top_degree_nodes(graph, 2), [3, 0])

    def test_too_many(self):
        """
        Test that asking for more nodes than the graph has fails.
        """
        with self.assertRaises(GraphValidationError):
            top_degree_nodes(path_graph(3), 4)


class DiffuseTests(SimpleTestCase):
    """
    Tests for diffuse
    """

    def test_time_zero_is_indicator(self):
        """
        Test that x(0) is the source indicator.
        """
        w = normalized_adjacency(cycle_graph(5))
        np.testing.assert_array_equal(diffuse(w, 2, 0), [0, 0, 1, 0, 0])

    def test_two_steps_on_unit_edge(self):
        """
        Test that two steps on a single edge return to the source.
        """
        w = normalized_adjacency(Graph.from_edges(2, [(0, 1, 1.0)]))
        np.testing.assert_allclose(diffuse(w, 0, 2), [1.0, 0.0], atol=1e-12)

    def test_star_center_one_step(self):
        """
        Test that one raw step from the star center puts 1 on every leaf.
        """
        np.testing.assert_array_equal(diffuse(adjacency(star_graph(3)), 0, 1), [0, 1, 1, 1])

    def test_recursion(self):
        """
        Test that x(t + 1) = W x(t) exactly.
        """
        w = normalized_adjacency(random_graph(15, 0.3, seed=6, directed=True))
        for t in range(6):
            with self.subTest(t=t):
                np.testing.assert_array_equal(diffuse(w, 4, t + 1), w.entries @ diffuse(w, 4, t))

    def test_invalid_arguments(self):
        """
        Test that sources outside the graph and negative times are rejected.
        """
        w = adjacency(path_graph(3))
        with self.assertRaises(GraphValidationError):
            diffuse(w, 3, 1)
        with self.assertRaises(ValueError):
            diffuse(w, 0, -1)


class GenerateDiffusionDatasetTests(SimpleTestCase):
    """
    Tests for generate_diffusion_dataset
    """

    def setUp(self):
        """
        Setup
        """
        self.graph = random_geometric_graph(40, 0.3, seed=7)
        self.sources = top_degree_nodes(self.graph, 5)

    def test_time_zero_only(self):
        """
        Test that t_max = 0 gives pure source indicators.
        """
        dataset = generate_diffusion_dataset(self.graph, self.sources, 50, t_max=0, seed=1)
        expected = np.eye(40)[np.array(self.sources)[dataset.labels]]
        np.testing.assert_array_equal(dataset.signals, expected)
        self.assertEqual(dataset.class_map, tuple(str(node) for node in self.sources))

    def test_label_histogram(self):
        """
        Test that 10,000 labels over 5 classes are uniform within three standard deviations.
        """
        dataset = generate_diffusion_dataset(self.graph, self.sources, 10_000, t_max=4, seed=2)
        sigma = np.sqrt(10_000 * 0.2 * 0.8)
        for count in dataset.class_counts():
            self.assertLessEqual(abs(count - 2_000), 3 * sigma)

    def test_norm_bound(self):
        """
        Test that normalized diffusion never grows the signal norm on undirected graphs.
        """
        for seed in range(3):
            graph = random_graph(30, 0.2, seed=seed)
            dataset = generate_diffusion_dataset(graph, top_degree_nodes(graph, 3), 300, 6, seed)
            norms = np.linalg.norm(dataset.signals, axis=1)
            self.assertTrue(np.all(norms <= (1 + 1e-5) ** 6))

    def test_signals_match_diffuse(self):
        """
        Test that every sample is a diffusion state of its source.
        """
        w = normalized_adjacency(self.graph)
        dataset = generate_diffusion_dataset(self.graph, self.sources, 40, t_max=3, seed=3, t_min=1)
        for signal, label in zip(dataset.signals, dataset.labels):
            source = self.sources[label]
            states = [diffuse(w, source, t) for t in range(1, 4)]
            self.assertTrue(any(np.array_equal(signal, state) for state in states))

    def test_raw_operator(self):
        """
        Test that the raw operator diffuses with the unscaled adjacency.
        """
        graph = star_graph(3)
        dataset = generate_diffusion_dataset(
            graph, [0], 20, t_max=1, seed=0, t_min=1, operator="raw"
        )
        np.testing.assert_array_equal(dataset.signals, np.tile([0.0, 1.0, 1.0, 1.0], (20, 1)))

    def test_deterministic(self):
        """
        Test that the same seed gives byte-identical dataset files and another seed does not.
        """
        first = generate_diffusion_dataset(self.graph, self.sources, 200, t_max=4, seed=9)
        second = generate_diffusion_dataset(self.graph, self.sources, 200, t_max=4, seed=9)
        other = generate_diffusion_dataset(self.graph, self.sources, 200, t_max=4, seed=10)
        self.assertEqual(format_dataset(first), format_dataset(second))
        self.assertNotEqual(format_dataset(first), format_dataset(other))

    def test_invalid_arguments(self):
        """
        Test that empty classes, no samples and bad time ranges or operators are rejected.
        """
        cases = [
            {"classes": [], "n": 5, "t_max": 1},
            {"classes": [0], "n": 0, "t_max": 1},
            {"classes": [0], "n": 5, "t_max": 1, "t_min": 2},
            {"classes": [0], "n": 5, "t_max": 1, "operator": "laplacian"},
        ]
        for options in cases:
            with self.subTest(**options), self.assertRaises(ValueError):
                generate_diffusion_dataset(self.graph, seed=0, **options)


class RandomGraphTests(SimpleTestCase):
    """
    Tests for the random graph generators
    """

    def test_geometric_graph(self):
        """
        Test node count, symmetry, unit weights and seeding of geometric graphs.
        """
        graph = random_geometric_graph(40, 0.25, seed=3)
        self.assertEqual(graph.n_nodes, 40)
        self.assertFalse(graph.directed)
        self.assertTrue(all(weight == 1.0 for _, _, weight in graph.edges))
        self.assertGreater(graph.n_arcs, 0)
        self.assertEqual(graph, random_geometric_graph(40, 0.25, seed=3))
        self.assertNotEqual(graph, random_geometric_graph(40, 0.25, seed=4))

    def test_block_graph_without_cross_edges(self):
        """
        Test that p_out = 0 keeps every edge inside one of the near-equal blocks.
        """
        graph = stochastic_block_graph(10, 3, 1.0, 0.0, seed=0)
        blocks = [0] * 4 + [1] * 3 + [2] * 3
        self.assertEqual(graph.n_nodes, 10)
        for src, dst, _ in graph.edges:
            self.assertEqual(blocks[src], blocks[dst])
        self.assertEqual(graph.n_arcs, 2 * (6 + 3 + 3))

    def test_block_graph_seeded(self):
        """
        Test that block graphs are reproducible from their seed.
        """
        self.assertEqual(
            stochastic_block_graph(40, 4, 0.3, 0.02, seed=5),
            stochastic_block_graph(40, 4, 0.3, 0.02, seed=5),
        )
