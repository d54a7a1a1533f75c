"""
Describes the per-action data sets the structure learner is trained on
"""
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from csm.environments.attributes import Action, COLUMN_NAMES
from csm.environments.triggers import Transition
from csm.exceptions import InsufficientData


class Dataset(object):
    """
    An ``n x d`` matrix of transition rows, every one of them recorded under
    the same action
    """
    def __init__(
            self,
            rows: np.ndarray,
            action: Action,
            column_names: Sequence[str] = COLUMN_NAMES
    ) -> None:
        """

        :param rows: One transition per row, columns in canonical order
        :param action: The action every row was recorded under
        :param column_names: The names of the columns
        :raises InsufficientData: If there are no rows, the width does not
            match the column names, or an entry is not finite
        """
        self._rows = np.array(rows, dtype=np.float64, ndmin=2)
        self._action = Action(action)
        self._column_names = tuple(column_names)
        self._check_consistency()

    @classmethod
    def from_transitions(
            cls, transitions: Iterable[Transition], action: Action
    ) -> 'Dataset':
        """

        :param transitions: Recorded transitions, all under ``action``
        :param action: The action they were recorded under
        :return: The data set of their rows
        """
        rows = [transition.row() for transition in transitions]
        if not rows:
            raise InsufficientData('No transitions recorded', action)
        return cls(np.vstack(rows), action)

    @property
    def rows(self) -> np.ndarray:
        return self._rows

    @property
    def action(self) -> Action:
        return self._action

    @property
    def column_names(self) -> Tuple[str, ...]:
        return self._column_names

    @property
    def n(self) -> int:
        return self._rows.shape[0]

    @property
    def d(self) -> int:
        return self._rows.shape[1]

    def column(self, name: str) -> np.ndarray:
        return self._rows[:, self._column_names.index(name)]

    def standardization(self) -> Tuple[np.ndarray, np.ndarray]:
        """

        :return: The mean and standard deviation of every column. Constant
            columns get a standard deviation of 1
        """
        means = self._rows.mean(axis=0)
        stds = self._rows.std(axis=0)
        stds[stds < 1e-12] = 1.0
        return means, stds

    def _check_consistency(self) -> None:
        if self._rows.ndim != 2 or self._rows.shape[0] < 1:
            raise InsufficientData('A data set needs at least one row',
                                   self._action)
        if self._rows.shape[1] != len(self._column_names):
            raise InsufficientData(
                'Rows have %d columns but %d names were given' % (
                    self._rows.shape[1], len(self._column_names)
                ),
                self._action
            )
        if not np.all(np.isfinite(self._rows)):
            raise InsufficientData('The data set has non-finite entries',
                                   self._action)

    def __repr__(self) -> str:
        return '{0}(action={1}, n={2}, d={3})'.format(
            self.__class__.__name__, self._action.label, self.n, self.d
        )


def split_by_action(
        transitions: Iterable[Transition]
) -> Dict[Action, Dataset]:
    """

    :param transitions: Transitions recorded under any actions
    :return: One data set per action that occurs at least once
    """
    rows = {}  # type: Dict[Action, List[np.ndarray]]
    for transition in transitions:
        rows.setdefault(transition.action, []).append(transition.row())
    return {
        action: Dataset(np.vstack(action_rows), action)
        for action, action_rows in sorted(rows.items())
    }
