"""
Contains tests for weighted adjacencies and thresholded graphs
"""
import unittest

import numpy as np

from csm.exceptions import CyclicAfterThreshold
from csm.structure import LearnedGraph, WeightedAdjacency, is_dag, threshold


class TestGraph(unittest.TestCase):
    @property
    def names(self):
        return ('a', 'b', 'c')


class TestWeightedAdjacency(TestGraph):
    def test_default_names(self) -> None:
        self.assertEqual(
            ('X0', 'X1'), WeightedAdjacency(np.zeros((2, 2))).column_names
        )

    def test_negative(self) -> None:
        with self.assertRaises(ValueError):
            WeightedAdjacency(np.array([[0.0, -0.1], [0.0, 0.0]]))

    def test_not_square(self) -> None:
        with self.assertRaises(ValueError):
            WeightedAdjacency(np.zeros((2, 3)))

    def test_read_only(self) -> None:
        w = WeightedAdjacency(np.zeros((2, 2)))
        with self.assertRaises(ValueError):
            w.weights[0, 1] = 1.0

    def test_array(self) -> None:
        weights = np.array([[0.0, 0.5], [0.0, 0.0]])
        np.testing.assert_array_equal(
            weights, np.asarray(WeightedAdjacency(weights))
        )


class TestThreshold(TestGraph):
    def test_zero(self) -> None:
        graph = threshold(WeightedAdjacency(np.zeros((3, 3)), self.names))
        self.assertEqual([], graph.edges())

    def test_one_edge(self) -> None:
        weights = np.zeros((3, 3))
        weights[0, 2] = 0.5
        weights[1, 2] = 0.3
        graph = threshold(WeightedAdjacency(weights, self.names), 0.3)
        self.assertEqual([('a', 'c')], graph.edges())
        self.assertEqual(['a'], graph.parents('c'))
        self.assertEqual(0.3, graph.omega)

    def test_two_cycle(self) -> None:
        weights = np.array([[0.0, 0.5], [0.5, 0.0]])
        with self.assertRaises(CyclicAfterThreshold):
            threshold(WeightedAdjacency(weights), 0.3)

    def test_cycle_below_threshold(self) -> None:
        weights = np.array([[0.0, 0.5], [0.2, 0.0]])
        self.assertEqual(
            [('X0', 'X1')], threshold(WeightedAdjacency(weights)).edges()
        )

    def test_bad_omega(self) -> None:
        with self.assertRaises(ValueError):
            threshold(WeightedAdjacency(np.zeros((2, 2))), 0.0)


class TestLearnedGraph(TestGraph):
    def test_networkx(self) -> None:
        edges = np.array([
            [False, True, True], [False, False, True],
            [False, False, False]
        ])
        graph = LearnedGraph(edges, 0.3, self.names)
        digraph = graph.to_networkx()
        self.assertEqual(set(self.names), set(digraph.nodes))
        self.assertEqual(
            {('a', 'b'), ('a', 'c'), ('b', 'c')}, set(digraph.edges)
        )

    def test_cycle_named(self) -> None:
        edges = np.array([
            [False, True, False], [False, False, True],
            [True, False, False]
        ])
        with self.assertRaises(CyclicAfterThreshold) as context:
            LearnedGraph(edges, 0.3, self.names)
        self.assertIn("'a'", str(context.exception))


class TestIsDag(TestGraph):
    def test_self_loop(self) -> None:
        self.assertFalse(is_dag(np.eye(2)))

    def test_chain(self) -> None:
        self.assertTrue(is_dag(np.diag([1.0, 1.0], k=1)))
