"""
Contains tests for per-action data sets
"""
import unittest

import numpy as np

from csm.environments import Action, COLUMN_NAMES, act, parse_layout, reset
from csm.exceptions import InsufficientData
from csm.structure import Dataset, split_by_action


class TestDataset(unittest.TestCase):
    @property
    def rows(self) -> np.ndarray:
        return np.array([[1.0, 5.0], [3.0, 5.0]])


class TestConstructor(TestDataset):
    def test_no_rows(self) -> None:
        with self.assertRaises(InsufficientData):
            Dataset(np.zeros((0, 2)), Action.UP, ('a', 'b'))

    def test_width(self) -> None:
        with self.assertRaises(InsufficientData) as context:
            Dataset(self.rows, Action.UP)
        self.assertIs(Action.UP, context.exception.action)

    def test_non_finite(self) -> None:
        with self.assertRaises(InsufficientData):
            Dataset(np.array([[np.nan, 1.0]]), Action.UP, ('a', 'b'))


class TestStandardization(TestDataset):
    def test_constant_column(self) -> None:
        means, stds = Dataset(self.rows, Action.UP, ('a', 'b')) \
            .standardization()
        np.testing.assert_array_equal([2.0, 5.0], means)
        np.testing.assert_array_equal([1.0, 1.0], stds)

    def test_column(self) -> None:
        data = Dataset(self.rows, Action.LEFT, ('a', 'b'))
        np.testing.assert_array_equal([5.0, 5.0], data.column('b'))
        self.assertEqual((2, 2), (data.n, data.d))


class TestSplitByAction(TestDataset):
    def test_split(self) -> None:
        state = reset(parse_layout(
            '#####\n#...#\n#.A.#\n#K.L#\n#####\n'
        ))
        transitions = []
        for action in (Action.UP, Action.DOWN, Action.UP):
            transition, outcome = act(state, action)
            transitions.append(transition)
            state = outcome.next_state
        datasets = split_by_action(transitions)
        self.assertEqual({Action.UP, Action.DOWN}, set(datasets))
        self.assertEqual(2, datasets[Action.UP].n)
        self.assertEqual(len(COLUMN_NAMES), datasets[Action.DOWN].d)
        np.testing.assert_array_equal(
            transitions[1].row(), datasets[Action.DOWN].rows[0]
        )
