"""
Describes structural masks: hard priors on which edges the learner may use.
Entry ``(k, j)`` is ``True`` iff an edge from column ``k`` into column ``j`` is
permitted. Self-loops are never permitted.
"""
from typing import List, Sequence

import numpy as np

from csm.environments.attributes import COLUMN_NAMES, OUTCOME_COLUMNS


class StructuralMask(object):
    """
    A ``d x d`` boolean matrix of permitted edges
    """
    def __init__(self, allowed: np.ndarray) -> None:
        """

        :param allowed: The permitted edges, parent on rows
        :raises ValueError: If the matrix is not square or permits a self-loop
        """
        self._allowed = np.array(allowed, dtype=bool)
        self._allowed.setflags(write=False)
        self._check_consistency()

    @classmethod
    def temporal(
            cls,
            column_names: Sequence[str] = COLUMN_NAMES,
            outcome_columns: Sequence[str] = OUTCOME_COLUMNS
    ) -> 'StructuralMask':
        """
        The mask used on transition data. Outcome columns (the reward and the
        agent position after acting) are parents of nothing, which bans every
        edge from time ``t + 1`` into time ``t`` and keeps the reward from
        explaining the move that earned it. Edges among time-``t`` columns and
        from time-``t`` columns into outcomes are permitted.

        :param column_names: The column order of the data
        :param outcome_columns: The columns describing the result of acting
        :return: The mask
        """
        d = len(column_names)
        allowed = ~np.eye(d, dtype=bool)
        for name in outcome_columns:
            allowed[list(column_names).index(name), :] = False
        return cls(allowed)

    @classmethod
    def tiered(cls, tiers: Sequence[int]) -> 'StructuralMask':
        """

        :param tiers: A tier number for each column
        :return: The mask permitting edges only from a lower tier into a
            strictly higher one
        """
        levels = np.asarray(tiers)
        return cls(levels[:, None] < levels[None, :])

    @classmethod
    def full(cls, d: int) -> 'StructuralMask':
        """

        :param d: The number of columns
        :return: The mask permitting every edge except self-loops
        """
        return cls(~np.eye(d, dtype=bool))

    @property
    def allowed(self) -> np.ndarray:
        return self._allowed

    @property
    def d(self) -> int:
        return self._allowed.shape[0]

    def permits(self, parent: int, child: int) -> bool:
        return bool(self._allowed[parent, child])

    def banned_parents(self, child: int) -> np.ndarray:
        """

        :param child: A column index
        :return: A boolean vector, ``True`` for columns that may not be
            parents of ``child``
        """
        return ~self._allowed[:, child]

    def to_list(self) -> List[List[bool]]:
        return self._allowed.tolist()

    def _check_consistency(self) -> None:
        if self._allowed.ndim != 2 or \
                self._allowed.shape[0] != self._allowed.shape[1]:
            raise ValueError(
                'Masks must be square, got shape %s' % (self._allowed.shape,)
            )
        if np.any(np.diag(self._allowed)):
            raise ValueError('Masks may not permit self-loops')

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StructuralMask) and \
            np.array_equal(self._allowed, other._allowed)

    def __repr__(self) -> str:
        return '{0}(d={1}, permitted={2})'.format(
            self.__class__.__name__, self.d, int(self._allowed.sum())
        )
