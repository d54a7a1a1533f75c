"""
Describes the actions of the Triggers world and the canonical column order of
its object-oriented attribute vector. The same order is used for training
data, model inputs and every file format, so nothing else in the library
hard-codes a column index.

The vector holds the ``(x, y, color)`` attributes of the agent and of its
four neighbors, followed by the number of keys still present. A transition row
appends the reward and the agent position after acting, giving 19 columns.
"""
import enum
from typing import Tuple

OBJECTS = ('agent', 'up', 'down', 'left', 'right')
ATTRIBUTES = ('x', 'y', 'c')

STATE_COLUMNS = tuple(
    '%s.%s' % (object_, attribute)
    for object_ in OBJECTS for attribute in ATTRIBUTES
) + ('num_keys',)  # type: Tuple[str, ...]

OUTCOME_COLUMNS = ('reward', 'agent.x_next', 'agent.y_next')

COLUMN_NAMES = STATE_COLUMNS + OUTCOME_COLUMNS

STATE_DIM = len(STATE_COLUMNS)
NUM_COLUMNS = len(COLUMN_NAMES)

AGENT_X = COLUMN_NAMES.index('agent.x')
AGENT_Y = COLUMN_NAMES.index('agent.y')
AGENT_C = COLUMN_NAMES.index('agent.c')
NUM_KEYS = COLUMN_NAMES.index('num_keys')
REWARD = COLUMN_NAMES.index('reward')
AGENT_X_NEXT = COLUMN_NAMES.index('agent.x_next')
AGENT_Y_NEXT = COLUMN_NAMES.index('agent.y_next')

COLOR_COLUMNS = tuple(
    index for index, name in enumerate(STATE_COLUMNS) if name.endswith('.c')
)


class Action(enum.IntEnum):
    """
    The four moves available to the agent. ``x`` is the row index and ``y``
    the column index, so ``UP`` decreases ``x``.
    """
    UP = 0
    DOWN = 1
    LEFT = 2
    RIGHT = 3

    @property
    def delta(self) -> Tuple[int, int]:
        """

        :return: The ``(drow, dcol)`` displacement of this action
        """
        return _DELTAS[self]

    @property
    def label(self) -> str:
        """

        :return: The lower-case name used in files and on the command line
        """
        return self.name.lower()

    @classmethod
    def parse(cls, label: str) -> 'Action':
        """

        :param label: An action name in any case, e.g. ``up`` or ``LEFT``
        :return: The matching action
        :raises ValueError: If the label names no action
        """
        try:
            return cls[label.strip().upper()]
        except KeyError:
            raise ValueError('Unknown action %r' % label)


_DELTAS = {
    Action.UP: (-1, 0),
    Action.DOWN: (1, 0),
    Action.LEFT: (0, -1),
    Action.RIGHT: (0, 1),
}


def neighbor_columns(action: Action) -> Tuple[int, int, int]:
    """

    :param action: The action whose neighbor is wanted
    :return: The indices of the ``x``, ``y`` and color columns of the
        neighbor lying in the direction of the action
    """
    offset = len(ATTRIBUTES) * (OBJECTS.index(action.label))
    return offset, offset + 1, offset + 2


def neighbor_color_column(action: Action) -> int:
    """

    :param action: The action whose neighbor is wanted
    :return: The index of the color column of that neighbor
    """
    return neighbor_columns(action)[2]
