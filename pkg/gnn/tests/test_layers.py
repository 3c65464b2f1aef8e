"""
This module contains tests for the filter bank, activation, readout and loss layers.
"""

import numpy as np
from django.test import SimpleTestCase

from gnn.layers import (
    DynamicMedianParams,
    FilterBankParams,
    LayerCache,
    ReadoutParams,
    cross_entropy,
    dynamic_median_backward,
    dynamic_median_forward,
    filter_backward,
    filter_forward,
    readout_backward,
    readout_forward,
    relu_backward,
    relu_forward,
    softmax,
    static_median_backward,
    static_median_forward,
)
from graphs.neighborhoods import build_neighborhood_table
from graphs.operators import adjacency, binary_gso, normalized_adjacency
from graphs.structures import Graph
from graphs.tests.helpers import path_graph, random_graph, star_graph
from median_gnn.exceptions import LabelError, ShapeError, StaleCacheError
from .helpers import min_neighborhood_gap, numerical_gradient, relative_error


def _batch(values):
    return np.array(values, dtype=np.float64).reshape(1, 1, -1)


class FilterBankTests(SimpleTestCase):
    """
    Tests for filter_forward and filter_backward
    """

    def setUp(self):
        """
        Setup
        """
        self.rng = np.random.default_rng(0)
        self.graph = random_graph(6, 0.5, 3)
        self.shift = normalized_adjacency(self.graph)

    def test_identity_filter(self):
        """
        Test that K = 1, h = [1] passes the input through, forward and backward.
        """
        x = self.rng.normal(size=(2, 1, 6))
        params = FilterBankParams([[[1.0]]])
        cache = LayerCache()
        np.testing.assert_array_equal(filter_forward(params, self.shift, x, cache), x)
        grad_out = self.rng.normal(size=(2, 1, 6))
        grad_h, grad_x = filter_backward(params, self.shift, cache, grad_out)
        np.testing.assert_array_equal(grad_x, grad_out)
        self.assertAlmostEqual(grad_h[0, 0, 0], float(np.sum(grad_out * x)), places=12)

    def test_star_single_shift(self):
        """
        Test that h = [0, 1] on the center indicator of a star puts 1 on every leaf.
        """
        shift = binary_gso(star_graph(3))
        params = FilterBankParams([[[0.0, 1.0]]])
        output = filter_forward(params, shift, _batch([1, 0, 0, 0]))
        self.assertEqual(output[0, 0].tolist(), [0.0, 1.0, 1.0, 1.0])

    def test_matches_dense_matrix_powers(self):
        """
        Test a 2-in, 3-out, 4-tap bank against explicit matrix powers.
        """
        h = self.rng.normal(size=(3, 2, 4))
        x = self.rng.normal(size=(5, 2, 6))
        s = self.shift.entries
        expected = np.zeros((5, 3, 6))
        for g in range(3):
            for f in range(2):
                for k in range(4):
                    expected[:, g] += h[g, f, k] * (np.linalg.matrix_power(s, k) @ x[:, f].T).T
        np.testing.assert_allclose(
            filter_forward(FilterBankParams(h), self.shift, x), expected, atol=1e-12
        )

    def test_parameter_count(self):
        """
        Test that 1 input, 32 outputs and 5 taps make 160 coefficients.
        """
        params = FilterBankParams.initialize(1, 32, 5, self.rng)
        self.assertEqual(params.n_parameters, 160)

    def test_gradients_match_finite_differences(self):
        """
        Test grad_h and grad_x of a 3-tap bank on a directed 6-node graph.
        """
        shift = adjacency(random_graph(6, 0.5, 4, directed=True))
        params = FilterBankParams(self.rng.normal(size=(2, 2, 3)))
        x = self.rng.normal(size=(3, 2, 6))
        weights = self.rng.normal(size=(3, 2, 6))

        def loss():
            return float(np.sum(weights * filter_forward(params, shift, x)))

        cache = LayerCache()
        filter_forward(params, shift, x, cache)
        grad_h, grad_x = filter_backward(params, shift, cache, weights)
        self.assertLess(relative_error(grad_h, numerical_gradient(loss, params.h)), 1e-6)
        self.assertLess(relative_error(grad_x, numerical_gradient(loss, x)), 1e-6)

    def test_zeroth_tap_gradient(self):
        """
        Test that the k = 0 coefficient gradient is <grad_out, x>.
        """
        params = FilterBankParams(self.rng.normal(size=(1, 1, 3)))
        x = self.rng.normal(size=(4, 1, 6))
        grad_out = self.rng.normal(size=(4, 1, 6))
        cache = LayerCache()
        filter_forward(params, self.shift, x, cache)
        grad_h, _ = filter_backward(params, self.shift, cache, grad_out)
        self.assertAlmostEqual(grad_h[0, 0, 0], float(np.sum(grad_out * x)), places=12)

    def test_shape_errors(self):
        """
        Test that wrong feature or node counts are rejected.
        """
        params = FilterBankParams(np.ones((2, 1, 3)))
        with self.assertRaises(ShapeError):
            filter_forward(params, self.shift, np.ones((1, 2, 6)))
        with self.assertRaises(ShapeError):
            filter_forward(params, self.shift, np.ones((1, 1, 5)))

    def test_stale_caches(self):
        """
        Test that backward refuses empty, foreign or outdated caches.
        """
        params = FilterBankParams(self.rng.normal(size=(1, 1, 3)))
        x = self.rng.normal(size=(2, 1, 6))
        with self.assertRaises(StaleCacheError):
            filter_backward(params, self.shift, LayerCache(), x)

        relu_cache = LayerCache()
        relu_forward(x, relu_cache)
        with self.assertRaises(StaleCacheError):
            filter_backward(params, self.shift, relu_cache, x)

        cache = LayerCache()
        filter_forward(params, self.shift, x, cache)
        with self.assertRaises(StaleCacheError):
            filter_backward(params, self.shift, cache, np.ones((3, 1, 6)))
        params.h[0, 0, 1] += 0.5
        with self.assertRaises(StaleCacheError):
            filter_backward(params, self.shift, cache, x)


class ReluTests(SimpleTestCase):
    """
    Tests for relu_forward and relu_backward
    """

    def test_forward(self):
        """
        Test [-1, 0, 2] -> [0, 0, 2] and the identity on positive inputs.
        """
        self.assertEqual(relu_forward(_batch([-1, 0, 2]))[0, 0].tolist(), [0.0, 0.0, 2.0])
        positive = _batch([0.5, 3.0])
        np.testing.assert_array_equal(relu_forward(positive), positive)

    def test_backward_mask(self):
        """
        Test that the gradient is masked by x > 0, with 0 at x = 0.
        """
        cache = LayerCache()
        relu_forward(_batch([-1, 2, 0]), cache)
        self.assertEqual(relu_backward(cache, _batch([5, 5, 5]))[0, 0].tolist(), [0.0, 5.0, 0.0])


class StaticMedianTests(SimpleTestCase):
    """
    Tests for static_median_forward and static_median_backward
    """

    def setUp(self):
        """
        Setup
        """
        self.rng = np.random.default_rng(1)
        self.path_table = build_neighborhood_table(path_graph(), 1)

    def test_path_example(self):
        """
        Test the path 0-1-2 with x = [1, 2, 3] and r = 1, forward and backward.
        """
        cache = LayerCache()
        output = static_median_forward(_batch([1, 2, 3]), self.path_table, 1, cache)
        self.assertEqual(output[0, 0].tolist(), [2.0, 2.0, 3.0])
        a, b, c = 0.3, -1.2, 2.0
        grad_x = static_median_backward(self.path_table, 1, cache, _batch([a, b, c]))
        np.testing.assert_allclose(grad_x[0, 0], [0.0, a + b, c])

    def test_zero_hop_is_identity(self):
        """
        Test that r = 0 passes values and gradients through.
        """
        x = self.rng.normal(size=(2, 3, 3))
        cache = LayerCache()
        np.testing.assert_array_equal(static_median_forward(x, self.path_table, 0, cache), x)
        grad_out = self.rng.normal(size=(2, 3, 3))
        np.testing.assert_array_equal(
            static_median_backward(self.path_table, 0, cache, grad_out), grad_out
        )

    def test_constant_signal(self):
        """
        Test that constant signals are fixed points at every hop.
        """
        table = build_neighborhood_table(random_graph(15, 0.2, 2), 3)
        x = np.full((1, 2, 15), 4.25)
        for hop in range(4):
            np.testing.assert_array_equal(static_median_forward(x, table, hop), x)

    def test_monotonicity(self):
        """
        Test that x <= y elementwise implies med(x) <= med(y).
        """
        table = build_neighborhood_table(random_graph(20, 0.15, 6), 3)
        for _ in range(10):
            x = self.rng.normal(size=(2, 2, 20))
            y = x + np.abs(self.rng.normal(size=x.shape))
            for hop in range(1, 4):
                lower = static_median_forward(x, table, hop)
                self.assertTrue(np.all(lower <= static_median_forward(y, table, hop)))

    def test_positive_affine_equivariance(self):
        """
        Test that med(a x + b) = a med(x) + b for a > 0.
        """
        table = build_neighborhood_table(random_graph(20, 0.15, 7), 2)
        x = self.rng.normal(size=(3, 2, 20))
        for a, b in [(2.0, 0.5), (0.3, -4.0)]:
            for hop in (1, 2):
                np.testing.assert_allclose(
                    static_median_forward(a * x + b, table, hop),
                    a * static_median_forward(x, table, hop) + b,
                    rtol=1e-12,
                    atol=1e-12,
                )

    def test_permutation_equivariance(self):
        """
        Test that relabeling the graph and the signal relabels the output, for static and
        dynamic medians.
        """
        graph = random_graph(18, 0.15, 12, directed=True)
        permutation = self.rng.permutation(18)
        table = build_neighborhood_table(graph, 2)
        relabeled = build_neighborhood_table(graph.permuted(permutation), 2)
        x = self.rng.normal(size=(2, 2, 18))
        moved = np.empty_like(x)
        moved[..., permutation] = x
        omega = DynamicMedianParams([0.2, -0.7, 1.1])
        for hop in (1, 2):
            expected = np.empty_like(x)
            expected[..., permutation] = static_median_forward(x, table, hop)
            np.testing.assert_array_equal(static_median_forward(moved, relabeled, hop), expected)
        expected = np.empty_like(x)
        expected[..., permutation] = dynamic_median_forward(x, table, omega)
        np.testing.assert_allclose(
            dynamic_median_forward(moved, relabeled, omega), expected, rtol=1e-12, atol=1e-12
        )

    def test_nonlinearity_witness(self):
        """
        Test that med(x + y) != med(x) + med(y) on the path for x = [1, 2, 3], y = [3, 1, 2].
        """
        x, y = _batch([1, 2, 3]), _batch([3, 1, 2])
        combined = static_median_forward(x + y, self.path_table, 1)
        separate = static_median_forward(x, self.path_table, 1) + static_median_forward(
            y, self.path_table, 1
        )
        self.assertEqual(combined[0, 0].tolist(), [4.0, 4.0, 5.0])
        self.assertEqual(separate[0, 0].tolist(), [5.0, 4.0, 5.0])

    def test_gradient_matches_finite_differences(self):
        """
        Test the routed gradient against finite differences at distinct values.
        """
        table = build_neighborhood_table(random_graph(8, 0.35, 9), 2)
        x = self.rng.normal(size=(2, 2, 8))
        self.assertGreater(min_neighborhood_gap(x, table, 2), 1e-4)
        weights = self.rng.normal(size=x.shape)

        for hop in (1, 2):
            def loss():
                return float(np.sum(weights * static_median_forward(x, table, hop)))

            cache = LayerCache()
            static_median_forward(x, table, hop, cache)
            grad_x = static_median_backward(table, hop, cache, weights)
            self.assertLess(relative_error(grad_x, numerical_gradient(loss, x)), 1e-6)

    def test_hop_beyond_table(self):
        """
        Test that a hop larger than the table's range is rejected.
        """
        with self.assertRaises(ShapeError):
            static_median_forward(_batch([1, 2, 3]), self.path_table, 2)


class DynamicMedianTests(SimpleTestCase):
    """
    Tests for dynamic_median_forward and dynamic_median_backward
    """

    def setUp(self):
        """
        Setup
        """
        self.rng = np.random.default_rng(2)
        self.path_table = build_neighborhood_table(path_graph(), 1)

    def test_identity_weights(self):
        """
        Test that omega = (1, 0, ..., 0) returns the input.
        """
        table = build_neighborhood_table(random_graph(10, 0.3, 1), 2)
        x = self.rng.normal(size=(2, 3, 10))
        np.testing.assert_array_equal(
            dynamic_median_forward(x, table, DynamicMedianParams.identity(2)), x
        )

    def test_path_examples(self):
        """
        Test omega = (0, 1) and omega = (0.5, 0.5) on the path with x = [1, 2, 3].
        """
        x = _batch([1, 2, 3])
        self.assertEqual(
            dynamic_median_forward(x, self.path_table, DynamicMedianParams([0, 1]))[0, 0].tolist(),
            [2.0, 2.0, 3.0],
        )
        self.assertEqual(
            dynamic_median_forward(x, self.path_table, DynamicMedianParams([0.5, 0.5]))[
                0, 0
            ].tolist(),
            [1.5, 2.0, 3.0],
        )

    def test_linearity_in_omega(self):
        """
        Test that the output is additive in omega.
        """
        table = build_neighborhood_table(random_graph(16, 0.2, 5), 3)
        x = self.rng.normal(size=(2, 2, 16))
        first, second = self.rng.normal(size=4), self.rng.normal(size=4)
        np.testing.assert_allclose(
            dynamic_median_forward(x, table, DynamicMedianParams(first + second)),
            dynamic_median_forward(x, table, DynamicMedianParams(first))
            + dynamic_median_forward(x, table, DynamicMedianParams(second)),
            rtol=1e-12,
            atol=1e-12,
        )

    def test_zero_upstream_gradient(self):
        """
        Test that a zero upstream gradient gives a zero omega gradient.
        """
        table = build_neighborhood_table(random_graph(10, 0.3, 2), 2)
        x = self.rng.normal(size=(2, 1, 10))
        params = DynamicMedianParams([0.4, 0.3, 0.3])
        cache = LayerCache()
        dynamic_median_forward(x, table, params, cache)
        grad_omega, _ = dynamic_median_backward(table, params, cache, np.zeros_like(x))
        np.testing.assert_array_equal(grad_omega, np.zeros(3))

    def test_single_node(self):
        """
        Test the scalar chain rule on a single-node graph with R = 0.
        """
        table = build_neighborhood_table(Graph.from_edges(1, []), 0)
        params = DynamicMedianParams([1.7])
        cache = LayerCache()
        output = dynamic_median_forward(_batch([3.0]), table, params, cache)
        self.assertAlmostEqual(output[0, 0, 0], 1.7 * 3.0)
        grad_omega, grad_x = dynamic_median_backward(table, params, cache, _batch([2.0]))
        self.assertAlmostEqual(grad_omega[0], 6.0)
        self.assertAlmostEqual(grad_x[0, 0, 0], 3.4)

    def test_gradients_match_finite_differences(self):
        """
        Test grad_omega and grad_x on a random 8-node graph with R = 2 and distinct values.
        """
        table = build_neighborhood_table(random_graph(8, 0.35, 10), 2)
        x = self.rng.normal(size=(2, 2, 8))
        self.assertGreater(min_neighborhood_gap(x, table, 2), 1e-4)
        params = DynamicMedianParams(self.rng.normal(size=3))
        weights = self.rng.normal(size=x.shape)

        def loss():
            return float(np.sum(weights * dynamic_median_forward(x, table, params)))

        cache = LayerCache()
        dynamic_median_forward(x, table, params, cache)
        grad_omega, grad_x = dynamic_median_backward(table, params, cache, weights)
        self.assertLess(relative_error(grad_omega, numerical_gradient(loss, params.omega)), 1e-6)
        self.assertLess(relative_error(grad_x, numerical_gradient(loss, x)), 1e-6)

    def test_changed_weights_make_cache_stale(self):
        """
        Test that updating omega after the forward pass invalidates the cache.
        """
        params = DynamicMedianParams([0.5, 0.5])
        cache = LayerCache()
        dynamic_median_forward(_batch([1, 2, 3]), self.path_table, params, cache)
        params.omega[1] = 0.25
        with self.assertRaises(StaleCacheError):
            dynamic_median_backward(self.path_table, params, cache, _batch([1, 1, 1]))


class ReadoutTests(SimpleTestCase):
    """
    Tests for softmax, readout_forward, readout_backward and cross_entropy
    """

    def setUp(self):
        """
        Setup
        """
        self.rng = np.random.default_rng(3)

    def test_zero_readout_is_uniform(self):
        """
        Test that zero weight and bias give 0.25 for each of 4 classes.
        """
        params = ReadoutParams(np.zeros((4, 6)), np.zeros(4))
        probs = readout_forward(params, self.rng.normal(size=(3, 2, 3)))
        np.testing.assert_allclose(probs, 0.25, atol=1e-15)

    def test_softmax_values(self):
        """
        Test softmax of (1, 2, 3) and the large-logit limit.
        """
        np.testing.assert_allclose(
            softmax(np.array([[1.0, 2.0, 3.0]]))[0], [0.0900, 0.2447, 0.6652], atol=5e-5
        )
        self.assertAlmostEqual(softmax(np.array([[1000.0, 0.0]]))[0, 0], 1.0)

    def test_rows_sum_to_one(self):
        """
        Test that probabilities sum to 1 within 1e-12 even for large logits.
        """
        logits = self.rng.normal(scale=50.0, size=(20, 7))
        np.testing.assert_allclose(softmax(logits).sum(axis=1), 1.0, atol=1e-12)

    def test_cross_entropy_values(self):
        """
        Test the loss at a perfect prediction, at uniform probabilities and at (0.7, 0.3).
        """
        loss, _ = cross_entropy(np.array([[0.0, 1.0]]), [1])
        self.assertEqual(loss, 0.0)
        loss, _ = cross_entropy(np.full((3, 5), 0.2), [0, 3, 4])
        self.assertAlmostEqual(loss, np.log(5))
        loss, grad = cross_entropy(np.array([[0.7, 0.3]]), [0])
        self.assertAlmostEqual(loss, 0.3567, places=4)
        np.testing.assert_allclose(grad, [[-0.3, 0.3]], atol=1e-15)

    def test_cross_entropy_gradient_rows_sum_to_zero(self):
        """
        Test that each sample's logit gradient sums to zero.
        """
        probs = softmax(self.rng.normal(size=(10, 4)))
        _, grad = cross_entropy(probs, self.rng.integers(0, 4, size=10))
        np.testing.assert_allclose(grad.sum(axis=1), 0.0, atol=1e-12)

    def test_label_out_of_range(self):
        """
        Test that labels must be smaller than the class count.
        """
        with self.assertRaises(LabelError):
            cross_entropy(np.full((1, 3), 1 / 3), [3])
        with self.assertRaises(LabelError):
            cross_entropy(np.full((1, 3), 1 / 3), [-1])

    def test_shape_mismatch(self):
        """
        Test that the flattened input must match the readout width.
        """
        with self.assertRaises(ShapeError):
            readout_forward(ReadoutParams(np.zeros((2, 5)), np.zeros(2)), np.zeros((1, 2, 3)))

    def test_gradients_match_finite_differences(self):
        """
        Test readout and loss gradients together: weight, bias and input.
        """
        params = ReadoutParams(self.rng.normal(size=(3, 8)), self.rng.normal(size=3))
        x = self.rng.normal(size=(4, 2, 4))
        labels = np.array([0, 2, 1, 2])

        def loss():
            return cross_entropy(readout_forward(params, x), labels)[0]

        cache = LayerCache()
        probs = readout_forward(params, x, cache)
        _, grad_logits = cross_entropy(probs, labels)
        grad_weight, grad_bias, grad_x = readout_backward(params, cache, grad_logits)
        self.assertLess(relative_error(grad_weight, numerical_gradient(loss, params.weight)), 1e-6)
        self.assertLess(relative_error(grad_bias, numerical_gradient(loss, params.bias)), 1e-6)
        self.assertLess(relative_error(grad_x, numerical_gradient(loss, x)), 1e-6)
