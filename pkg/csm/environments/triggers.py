"""
Implements the Triggers gridworld. The agent walks on a walled grid holding
keys and locks. All keys must be collected before a lock can be opened;
opening a lock pays ``+1`` and attempting one while any key remains costs
``-1``. Keys disappear when collected and locks when opened.

The simulator has pure-value semantics: :func:`step` never mutates its input
and returns a fresh :class:`EnvState`, so states may be shared between
workers and used as dictionary keys.
"""
import enum
from collections import deque
from typing import Dict, FrozenSet, Iterable, List, NamedTuple
from typing import Optional, Sequence, Set, Tuple

import numpy as np

from csm.environments.attributes import Action, STATE_DIM, NUM_KEYS
from csm.environments.attributes import AGENT_X, AGENT_Y
from csm.exceptions import InvalidSpec, SteppedTerminal

Position = Tuple[int, int]

DEFAULT_MAX_STEPS = 200


class CellKind(enum.IntEnum):
    """
    The kinds of cell that can appear in a grid
    """
    FREE = 0
    WALL = 1
    KEY = 2
    LOCK = 3
    AGENT = 4


class Cell(NamedTuple):
    kind: CellKind
    color_code: int


class Palette(object):
    """
    Maps each kind of cell to the color code the agent observes. Free space,
    walls and the agent always read as 0, 1 and 2; keys and locks draw their
    colors from ``{3, 4, 5, ...}``. Keys and locks are told apart only by
    their color, which is what makes transfer to a recolored world a
    problem at all.
    """
    FREE = 0
    WALL = 1
    AGENT = 2
    FIRST_OBJECT_CODE = 3

    def __init__(self, key: int = 3, lock: int = 4) -> None:
        """

        :param key: The color code of keys
        :param lock: The color code of locks
        """
        self._codes = {
            CellKind.FREE: self.FREE,
            CellKind.WALL: self.WALL,
            CellKind.AGENT: self.AGENT,
            CellKind.KEY: int(key),
            CellKind.LOCK: int(lock),
        }  # type: Dict[CellKind, int]
        self._check_consistency()

    @classmethod
    def default(cls) -> 'Palette':
        """

        :return: The source palette: keys read 3 and locks read 4
        """
        return cls(key=3, lock=4)

    @classmethod
    def inverted(cls) -> 'Palette':
        """

        :return: The target palette with the key and lock colors swapped
        """
        return cls(key=4, lock=3)

    @property
    def key(self) -> int:
        return self._codes[CellKind.KEY]

    @property
    def lock(self) -> int:
        return self._codes[CellKind.LOCK]

    def code(self, kind: CellKind) -> int:
        """

        :param kind: The kind of cell
        :return: The color code observed for that kind
        """
        return self._codes[kind]

    def kind_of(self, code: int) -> Optional[CellKind]:
        """

        :param code: A color code
        :return: The kind of cell drawn in that color, or ``None`` if the
            palette does not use the code
        """
        for kind, kind_code in self._codes.items():
            if kind_code == code:
                return kind
        return None

    @property
    def object_colors(self) -> Tuple[int, ...]:
        """

        :return: The colors of the objects the agent can interact with
            (walls, keys and locks) in ascending order
        """
        return tuple(sorted((self.WALL, self.key, self.lock)))

    def to_dict(self) -> Dict[str, int]:
        return {'key': self.key, 'lock': self.lock}

    def _check_consistency(self) -> None:
        """
        Raise :class:`InvalidSpec` if key and lock colors collide with each
        other or with the reserved codes
        """
        for name, code in (('key', self.key), ('lock', self.lock)):
            if code < self.FIRST_OBJECT_CODE:
                raise InvalidSpec(
                    'The %s color %d collides with a reserved code' % (
                        name, code
                    )
                )
        if self.key == self.lock:
            raise InvalidSpec(
                'Keys and locks share the color %d' % self.key
            )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Palette) and self._codes == other._codes

    def __hash__(self) -> int:
        return hash((self.key, self.lock))

    def __repr__(self) -> str:
        return '{0}(key={1}, lock={2})'.format(
            self.__class__.__name__, self.key, self.lock
        )


class GridSpec(object):
    """
    The static description of a Triggers world: the layout of walls, keys and
    locks, where the agent starts, and the palette the world is drawn in.
    The agent's start cell is stored as free space.
    """
    def __init__(
            self,
            layout: Sequence[Sequence[CellKind]],
            agent_start: Position,
            palette: Optional[Palette] = None
    ) -> None:
        """

        :param layout: Rows of cell kinds. Only ``FREE``, ``WALL``, ``KEY``
            and ``LOCK`` may appear
        :param agent_start: The ``(row, col)`` at which the agent starts
        :param palette: The colors of the world, the default palette if
            omitted
        :raises InvalidSpec: If the layout is not a playable world
        """
        self._layout = tuple(
            tuple(CellKind(cell) for cell in row) for row in layout
        )
        self._agent_start = (int(agent_start[0]), int(agent_start[1]))
        self._palette = palette if palette is not None else Palette.default()
        self.check_consistency()

    @property
    def layout(self) -> Tuple[Tuple[CellKind, ...], ...]:
        return self._layout

    @property
    def height(self) -> int:
        return len(self._layout)

    @property
    def width(self) -> int:
        return len(self._layout[0]) if self._layout else 0

    @property
    def agent_start(self) -> Position:
        return self._agent_start

    @property
    def palette(self) -> Palette:
        return self._palette

    @property
    def keys(self) -> FrozenSet[Position]:
        """

        :return: The positions of all keys in the layout
        """
        return self._positions_of(CellKind.KEY)

    @property
    def locks(self) -> FrozenSet[Position]:
        """

        :return: The positions of all locks in the layout
        """
        return self._positions_of(CellKind.LOCK)

    def kind_at(self, position: Position) -> CellKind:
        return self._layout[position[0]][position[1]]

    def cell(self, position: Position) -> Cell:
        """

        :param position: A ``(row, col)`` inside the grid
        :return: The cell there, with its color under this palette
        """
        kind = self.kind_at(position)
        return Cell(kind, self._palette.code(kind))

    def colors(self) -> FrozenSet[int]:
        """

        :return: The color codes of every non-agent cell in the layout
        """
        return frozenset(
            self._palette.code(kind) for row in self._layout for kind in row
        )

    def with_palette(self, palette: Palette) -> 'GridSpec':
        """

        :param palette: The new palette
        :return: The same layout drawn in different colors
        """
        return self.__class__(self._layout, self._agent_start, palette)

    def check_consistency(self) -> None:
        """
        Raise :class:`InvalidSpec` unless the grid is at least 3x3 and
        rectangular, its boundary is all wall, the agent starts on free space
        and there is at least one key and one lock
        """
        if self.height < 3 or any(len(row) < 3 for row in self._layout):
            raise InvalidSpec('Grids must be at least 3x3')
        if any(len(row) != self.width for row in self._layout):
            raise InvalidSpec('The layout is not rectangular')
        for row in range(self.height):
            for col in range(self.width):
                on_boundary = row in (0, self.height - 1) or \
                    col in (0, self.width - 1)
                kind = self._layout[row][col]
                if kind == CellKind.AGENT:
                    raise InvalidSpec(
                        'The agent is placed through agent_start, not the '
                        'layout (found at %s)' % ((row, col),)
                    )
                if on_boundary and kind != CellKind.WALL:
                    raise InvalidSpec(
                        'Boundary cell %s is %s, not a wall' % (
                            (row, col), kind.name
                        )
                    )
        row, col = self._agent_start
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise InvalidSpec(
                'The agent start %s is outside the grid' % (
                    self._agent_start,
                )
            )
        if self._layout[row][col] != CellKind.FREE:
            raise InvalidSpec(
                'The agent starts on a %s cell' % self._layout[row][col].name
            )
        if not self.keys:
            raise InvalidSpec('The layout has no key')
        if not self.locks:
            raise InvalidSpec('The layout has no lock')

    def _positions_of(self, kind: CellKind) -> FrozenSet[Position]:
        return frozenset(
            (row, col)
            for row, cells in enumerate(self._layout)
            for col, cell in enumerate(cells) if cell == kind
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, GridSpec) and (
            self._layout, self._agent_start, self._palette
        ) == (other._layout, other._agent_start, other._palette)

    def __hash__(self) -> int:
        return hash((self._layout, self._agent_start, self._palette))

    def __repr__(self) -> str:
        return '{0}(height={1}, width={2}, keys={3}, locks={4}, ' \
            'palette={5})'.format(
                self.__class__.__name__, self.height, self.width,
                len(self.keys), len(self.locks), self._palette
            )


class EnvState(object):
    """
    The full state of a world during an episode: where the agent is, which
    keys and locks are still present and how many steps have been taken. The
    number of keys is derived from the surviving keys, so the two can never
    disagree.
    """
    __slots__ = (
        '_spec', '_agent_pos', '_alive_keys', '_alive_locks', '_step_count',
        '_max_steps'
    )

    def __init__(
            self,
            spec: GridSpec,
            agent_pos: Position,
            alive_keys: Iterable[Position],
            alive_locks: Iterable[Position],
            step_count: int = 0,
            max_steps: int = DEFAULT_MAX_STEPS
    ) -> None:
        self._spec = spec
        self._agent_pos = (int(agent_pos[0]), int(agent_pos[1]))
        self._alive_keys = frozenset(alive_keys)
        self._alive_locks = frozenset(alive_locks)
        self._step_count = int(step_count)
        self._max_steps = int(max_steps)
        self._check_consistency()

    @property
    def spec(self) -> GridSpec:
        return self._spec

    @property
    def agent_pos(self) -> Position:
        return self._agent_pos

    @property
    def alive_keys(self) -> FrozenSet[Position]:
        return self._alive_keys

    @property
    def alive_locks(self) -> FrozenSet[Position]:
        return self._alive_locks

    @property
    def num_keys(self) -> int:
        return len(self._alive_keys)

    @property
    def step_count(self) -> int:
        return self._step_count

    @property
    def max_steps(self) -> int:
        return self._max_steps

    @property
    def terminal(self) -> bool:
        """

        :return: ``True`` once every lock is open or the step budget is spent
        """
        return not self._alive_locks or self._step_count >= self._max_steps

    def kind_at(self, position: Position) -> CellKind:
        """

        :param position: A ``(row, col)`` inside the grid
        :return: What is at that cell now. Collected keys and opened locks
            read as free space
        """
        if position in self._alive_keys:
            return CellKind.KEY
        if position in self._alive_locks:
            return CellKind.LOCK
        if self._spec.kind_at(position) == CellKind.WALL:
            return CellKind.WALL
        return CellKind.FREE

    def color_at(self, position: Position) -> int:
        return self._spec.palette.code(self.kind_at(position))

    def replace(self, **changes: object) -> 'EnvState':
        """

        :param changes: Fields to change, named as in the constructor
        :return: A copy of this state with the given fields replaced
        """
        fields = {
            'spec': self._spec,
            'agent_pos': self._agent_pos,
            'alive_keys': self._alive_keys,
            'alive_locks': self._alive_locks,
            'step_count': self._step_count,
            'max_steps': self._max_steps,
        }  # type: Dict[str, object]
        fields.update(changes)
        return EnvState(**fields)  # type: ignore

    @property
    def configuration(self) -> Tuple[Position, FrozenSet, FrozenSet]:
        """

        :return: The part of the state that determines future dynamics,
            ignoring the step counter
        """
        return self._agent_pos, self._alive_keys, self._alive_locks

    def _check_consistency(self) -> None:
        if self._spec.kind_at(self._agent_pos) == CellKind.WALL:
            raise InvalidSpec(
                'The agent stands inside a wall at %s' % (self._agent_pos,)
            )
        if self._alive_keys & self._alive_locks:
            raise InvalidSpec('A cell holds both a key and a lock')

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EnvState) and (
            self._spec, self.configuration, self._step_count,
            self._max_steps
        ) == (
            other._spec, other.configuration, other._step_count,
            other._max_steps
        )

    def __hash__(self) -> int:
        return hash((self.configuration, self._step_count))

    def __repr__(self) -> str:
        return '{0}(agent_pos={1}, num_keys={2}, locks={3}, step={4})'.format(
            self.__class__.__name__, self._agent_pos, self.num_keys,
            len(self._alive_locks), self._step_count
        )


class StepOutcome(NamedTuple):
    next_state: EnvState
    reward: int
    terminal: bool


class Transition(NamedTuple):
    """
    One recorded step: the attributes before acting, the action, the reward,
    the attributes after acting and whether the episode ended
    """
    state: np.ndarray
    action: Action
    reward: int
    next_state: np.ndarray
    terminal: bool

    @property
    def agent_next(self) -> Tuple[int, int]:
        return int(self.next_state[AGENT_X]), int(self.next_state[AGENT_Y])

    def row(self) -> np.ndarray:
        """

        :return: The 19-column transition row: the 16 time-``t`` attributes,
            the reward and the agent position after acting
        """
        return np.concatenate((
            self.state,
            (self.reward, self.next_state[AGENT_X], self.next_state[AGENT_Y])
        ))


def reset(spec: GridSpec, max_steps: int = DEFAULT_MAX_STEPS) -> EnvState:
    """

    :param spec: The world to start
    :param max_steps: The number of steps after which the episode ends
    :return: The initial state, with every key and lock present
    :raises InvalidSpec: If the specification is not a playable world
    """
    spec.check_consistency()
    return EnvState(
        spec, spec.agent_start, spec.keys, spec.locks, 0, max_steps
    )


def step(state: EnvState, action: Action) -> StepOutcome:
    """
    Apply one action. Walls and locks that cannot be opened yet block the
    agent; keys and openable locks are consumed as the agent moves onto them.

    :param state: The state to act in
    :param action: The move to make
    :return: The next state, the reward and whether the episode has ended
    :raises SteppedTerminal: If the state is already terminal
    """
    if state.terminal:
        raise SteppedTerminal('Cannot act in a terminal state %r' % state)

    drow, dcol = Action(action).delta
    row, col = state.agent_pos
    target = (row + drow, col + dcol)
    kind = state.kind_at(target)

    reward = 0
    agent_pos = state.agent_pos
    alive_keys = state.alive_keys
    alive_locks = state.alive_locks

    if kind == CellKind.FREE:
        agent_pos = target
    elif kind == CellKind.KEY:
        agent_pos = target
        alive_keys = alive_keys - {target}
    elif kind == CellKind.LOCK:
        if state.num_keys > 0:
            reward = -1
        else:
            agent_pos = target
            alive_locks = alive_locks - {target}
            reward = 1

    next_state = state.replace(
        agent_pos=agent_pos,
        alive_keys=alive_keys,
        alive_locks=alive_locks,
        step_count=state.step_count + 1
    )
    return StepOutcome(next_state, reward, next_state.terminal)


def observe(state: EnvState) -> np.ndarray:
    """

    :param state: The state to describe
    :return: The 16 time-``t`` attributes in canonical column order: the
        position and color of the agent and of its up, down, left and right
        neighbors, then the number of keys left
    """
    row, col = state.agent_pos
    vector = np.empty(STATE_DIM, dtype=np.float64)
    vector[0:3] = (row, col, state.spec.palette.code(CellKind.AGENT))
    for action in Action:
        drow, dcol = action.delta
        neighbor = (row + drow, col + dcol)
        offset = 3 * (action.value + 1)
        vector[offset:offset + 3] = (
            neighbor[0], neighbor[1], state.color_at(neighbor)
        )
    vector[NUM_KEYS] = state.num_keys
    return vector


def reachable_states(start: EnvState) -> List[EnvState]:
    """
    Enumerate every configuration reachable from a state by breadth-first
    search, ignoring the step budget. Each configuration appears once, with
    the step counter of the start state.

    :param start: The state to search from
    :return: The reachable states in breadth-first order, the start first
    """
    seen = {start.configuration}  # type: Set[Tuple]
    order = [start]
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if not state.alive_locks:
            continue
        fresh = state.replace(step_count=0, max_steps=1)
        for action in Action:
            successor = step(fresh, action).next_state.replace(
                step_count=start.step_count, max_steps=start.max_steps
            )
            if successor.configuration not in seen:
                seen.add(successor.configuration)
                order.append(successor)
                queue.append(successor)
    return order


def optimal_return(
        start: EnvState, horizon: int, cache: Optional[Dict] = None
) -> int:
    """
    The best cumulative reward any action sequence of the given length can
    collect from a state, found by exhaustive dynamic programming.

    :param start: The state to plan from
    :param horizon: The number of actions
    :param cache: Optional memo shared between calls on the same world
    :return: The optimal undiscounted return over the horizon
    """
    memo = {} if cache is None else cache  # type: Dict
    key = (start.configuration, start.step_count, horizon)
    if horizon == 0 or start.terminal:
        return 0
    if key in memo:
        return memo[key]
    best = max(
        outcome.reward + (
            0 if outcome.terminal
            else optimal_return(outcome.next_state, horizon - 1, memo)
        )
        for outcome in (step(start, action) for action in Action)
    )
    memo[key] = best
    return best


def act(state: EnvState, action: Action) -> Tuple[Transition, StepOutcome]:
    """
    Step the world and record what happened

    :param state: A non-terminal state
    :param action: The move to make
    :return: The recorded transition and the raw outcome
    """
    outcome = step(state, action)
    transition = Transition(
        observe(state), Action(action), outcome.reward,
        observe(outcome.next_state), outcome.terminal
    )
    return transition, outcome
