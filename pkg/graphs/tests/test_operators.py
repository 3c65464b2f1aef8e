"""
This module contains tests for the shift operators and the spectral radius.
"""

import numpy as np
from django.test import SimpleTestCase

from graphs.operators import adjacency, binary_gso, normalized_adjacency, spectral_radius
from graphs.structures import Graph, ShiftMatrix
from median_gnn.exceptions import ConvergenceError, NoSpectralRadiusError
from .helpers import random_graph, star_graph


class AdjacencyTests(SimpleTestCase):
    """
    Tests for adjacency and binary_gso
    """

    def test_undirected_unit_edge(self):
        """
        Test the 2-node undirected adjacency and binary operator.
        """
        graph = Graph.from_edges(2, [(0, 1, 1.0)])
        np.testing.assert_array_equal(adjacency(graph).entries, [[0, 1], [1, 0]])
        np.testing.assert_array_equal(binary_gso(graph).entries, [[0, 1], [1, 0]])

    def test_transpose_convention(self):
        """
        Test that arc (0, 1, 2.5) lands in entry (1, 0), and is binarized in the GSO.
        """
        graph = Graph.from_edges(2, [(0, 1, 2.5)], directed=True)
        np.testing.assert_array_equal(adjacency(graph).entries, [[0, 0], [2.5, 0]])
        np.testing.assert_array_equal(binary_gso(graph).entries, [[0, 0], [1, 0]])

    def test_empty_edge_list(self):
        """
        Test that an edgeless graph gives zero matrices.
        """
        graph = Graph.from_edges(3, [])
        self.assertFalse(np.any(adjacency(graph).entries))
        self.assertFalse(np.any(binary_gso(graph).entries))

    def test_entries_are_read_only(self):
        """
        Test that shift matrices cannot be modified after construction.
        """
        shift = adjacency(Graph.from_edges(2, [(0, 1, 1.0)]))
        with self.assertRaises(ValueError):
            shift.entries[0, 0] = 5.0


class SpectralRadiusTests(SimpleTestCase):
    """
    Tests for spectral_radius and normalized_adjacency
    """

    def test_two_cycle(self):
        """
        Test that the 2-cycle has spectral radius 1.
        """
        self.assertAlmostEqual(spectral_radius(ShiftMatrix([[0, 1], [1, 0]])), 1.0, places=9)

    def test_scaled_identity(self):
        """
        Test that 3 I has spectral radius 3.
        """
        self.assertAlmostEqual(spectral_radius(ShiftMatrix(3 * np.eye(3))), 3.0, places=9)

    def test_star_matches_dense_eigensolver(self):
        """
        Test that the star K_{1,3} has spectral radius sqrt(3), as a dense eigensolver reports.
        """
        shift = adjacency(star_graph(3))
        oracle = np.max(np.abs(np.linalg.eigvals(shift.entries)))
        self.assertAlmostEqual(oracle, np.sqrt(3), places=12)
        self.assertAlmostEqual(spectral_radius(shift), np.sqrt(3), places=7)

    def test_random_graphs_match_dense_eigensolver(self):
        """
        Test undirected and directed random graphs against numpy's eigenvalues.
        """
        for seed, directed in [(1, False), (2, False), (3, True), (4, True)]:
            shift = adjacency(random_graph(25, 0.3, seed, directed=directed))
            oracle = np.max(np.abs(np.linalg.eigvals(shift.entries)))
            self.assertAlmostEqual(spectral_radius(shift) / oracle, 1.0, places=6)

    def test_scaling_property(self):
        """
        Test that spectral_radius(c S) = |c| spectral_radius(S), for positive and negative c.
        """
        shift = adjacency(random_graph(20, 0.3, 7))
        radius = spectral_radius(shift)
        for factor in (2.5, -0.5, -3.0):
            self.assertAlmostEqual(
                spectral_radius(shift.scaled(factor)) / (abs(factor) * radius), 1.0, places=8
            )

    def test_zero_matrix(self):
        """
        Test that the zero matrix has no spectral radius.
        """
        with self.assertRaises(NoSpectralRadiusError):
            spectral_radius(ShiftMatrix(np.zeros((3, 3))))

    def test_acyclic_graph_has_zero_radius(self):
        """
        Test that directed acyclic graphs have radius 0 and cannot be normalized.
        """
        path = Graph.from_edges(3, [(0, 1, 1.0), (1, 2, 1.0)], directed=True)
        diamond = Graph.from_edges(
            4, [(0, 1, 2.0), (0, 2, 0.5), (1, 3, 1.0), (2, 3, 3.0)], directed=True
        )
        for graph in (path, diamond):
            with self.subTest(n_nodes=graph.n_nodes):
                self.assertEqual(spectral_radius(adjacency(graph)), 0.0)
                with self.assertRaises(NoSpectralRadiusError):
                    normalized_adjacency(graph)

    def test_diagonal_entry_is_not_nilpotent(self):
        """
        Test that a triangular matrix with one diagonal entry has that entry as radius.
        """
        shift = ShiftMatrix([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [0.0, 0.0, 0.5]])
        self.assertAlmostEqual(spectral_radius(shift), 0.5, places=6)

    def test_non_convergence_carries_last_iterate(self):
        """
        Test that running out of iterations raises with the last estimate attached.
        """
        shift = adjacency(random_graph(30, 0.2, 5))
        with self.assertRaises(ConvergenceError) as context:
            spectral_radius(shift, tol=1e-15, max_iter=2)
        self.assertGreater(context.exception.last_iterate, 0.0)

    def test_normalized_unit_and_weighted_edges(self):
        """
        Test that a 2-node edge normalizes to [[0,1],[1,0]] whatever its weight.
        """
        for weight in (1.0, 4.0):
            graph = Graph.from_edges(2, [(0, 1, weight)])
            np.testing.assert_allclose(
                normalized_adjacency(graph).entries, [[0, 1], [1, 0]], atol=1e-12
            )

    def test_normalized_star(self):
        """
        Test that the star normalizes to entries 1/sqrt(3) on its pattern.
        """
        entries = normalized_adjacency(star_graph(3)).entries
        pattern = adjacency(star_graph(3)).entries > 0
        np.testing.assert_allclose(entries[pattern], 1 / np.sqrt(3), rtol=1e-7)
        self.assertFalse(np.any(entries[~pattern]))

    def test_normalized_has_unit_radius(self):
        """
        Test that the normalized adjacency has spectral radius 1 within 10 tol.
        """
        tol = 1e-9
        for seed, directed in [(11, False), (12, True)]:
            normalized = normalized_adjacency(random_graph(30, 0.2, seed, directed), tol=tol)
            self.assertAlmostEqual(spectral_radius(normalized, tol=tol), 1.0, delta=10 * tol)

    def test_normalizing_edgeless_graph_fails(self):
        """
        Test that an edgeless graph cannot be normalized.
        """
        with self.assertRaises(NoSpectralRadiusError):
            normalized_adjacency(Graph.from_edges(3, []))
