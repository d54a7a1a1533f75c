"""
Implements deep Q-learning on the Triggers attribute vector: an online and a
target network, epsilon-greedy acting, one-step temporal-difference updates
with RMSProp and a periodic target sync.
"""
import logging
from typing import Any, Callable, Dict, List, Mapping, NamedTuple
from typing import Optional, Sequence, Tuple

import numpy as np

from csm.agents.replay import Batch, ReplayBuffer
from csm.environments.attributes import Action, STATE_COLUMNS, STATE_DIM
from csm.environments.triggers import EnvState, Transition, act, observe
from csm.exceptions import InvalidConfig
from csm.networks import Activation, Approximator, RMSProp

log = logging.getLogger(__name__)

EnvFactory = Callable[[], EnvState]
Rewrite = Callable[[np.ndarray], np.ndarray]

_X_COLUMNS = [
    index for index, name in enumerate(STATE_COLUMNS) if name.endswith('.x')
]
_Y_COLUMNS = [
    index for index, name in enumerate(STATE_COLUMNS) if name.endswith('.y')
]


class DqnConfig(NamedTuple):
    """
    Hyperparameters of :func:`train_dqn`. Epsilon stays at ``epsilon_start``
    for the first ``burn_in`` steps and then falls linearly to
    ``epsilon_end`` at ``total_steps``.
    """
    total_steps: int = 250000
    burn_in: int = 3000
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    target_sync_every: int = 2000
    step_size: float = 0.00025
    gamma: float = 0.99
    batch_size: int = 32
    capacity: int = 10000
    hidden: Tuple[int, ...] = (64, 64)
    seed: int = 0

    def check(self) -> None:
        """
        :raises InvalidConfig: If a field is outside its range
        """
        if not 0 <= self.epsilon_end <= self.epsilon_start <= 1:
            raise InvalidConfig(
                'Need 0 <= epsilon_end <= epsilon_start <= 1, got %g and %g'
                % (self.epsilon_end, self.epsilon_start)
            )
        counts = (
            self.total_steps, self.burn_in, self.target_sync_every,
            self.batch_size, self.capacity
        )
        if any(count < 1 for count in counts):
            raise InvalidConfig('Step counts and sizes must be positive')
        if self.total_steps < self.burn_in:
            raise InvalidConfig(
                'total_steps (%d) is shorter than burn_in (%d)' % (
                    self.total_steps, self.burn_in
                )
            )
        if self.step_size <= 0 or not 0 <= self.gamma <= 1:
            raise InvalidConfig(
                'Need a positive step size and a discount in [0, 1]'
            )
        if any(width < 1 for width in self.hidden):
            raise InvalidConfig('Hidden layers must have positive widths')


class CurvePoint(NamedTuple):
    """
    One finished episode of a training run
    """
    global_step: int
    episode_index: int
    episode_return: float
    epsilon: float
    phase: str


class QNetworks(object):
    """
    The online network and its periodically synchronized target copy
    """
    def __init__(self, online: Approximator, target: Approximator) -> None:
        """

        :param online: The network trained at every update
        :param target: The network used for bootstrapped targets
        :raises ValueError: If the two networks have different shapes
        """
        if online.layer_dims != target.layer_dims:
            raise ValueError(
                'Online and target shapes differ: %s and %s' % (
                    online.layer_dims, target.layer_dims
                )
            )
        self._online = online
        self._target = target

    @classmethod
    def initialize(
            cls,
            rng: np.random.Generator,
            hidden: Sequence[int] = (64, 64),
            input_dim: int = STATE_DIM
    ) -> 'QNetworks':
        """

        :param rng: The random source
        :param hidden: The widths of the ReLU hidden layers
        :param input_dim: The length of the encoded state
        :return: Freshly drawn networks with one output per action. The
            target starts as a copy of the online network
        """
        online = Approximator.initialize(
            (input_dim,) + tuple(hidden) + (len(Action),), rng,
            Activation.RELU
        )
        return cls(online, online.copy())

    @property
    def online(self) -> Approximator:
        return self._online

    @property
    def target(self) -> Approximator:
        return self._target

    def values(self, x: np.ndarray) -> np.ndarray:
        return self._online.forward(x)

    def sync(self) -> None:
        self._target = self._online.copy()

    def to_dict(self) -> Dict[str, Any]:
        return {
            'online': self._online.to_dict(),
            'target': self._target.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> 'QNetworks':
        return cls(
            Approximator.from_dict(data['online']),
            Approximator.from_dict(data['target'])
        )

    def __repr__(self) -> str:
        return '{0}(layer_dims={1})'.format(
            self.__class__.__name__, self._online.layer_dims
        )


class TrainingResult(NamedTuple):
    q: QNetworks
    curve: List[CurvePoint]
    random_actions: int
    updates: int


def encode_attributes(
        attributes: np.ndarray, height: int, width: int
) -> np.ndarray:
    """

    :param attributes: The 16 time-``t`` attributes
    :param height: The number of grid rows
    :param width: The number of grid columns
    :return: The network input: row positions divided by the height, column
        positions by the width, colors and the key count unchanged
    """
    encoded = np.array(attributes, dtype=np.float64)
    encoded[_X_COLUMNS] /= height
    encoded[_Y_COLUMNS] /= width
    return encoded


def encode_state(
        state: EnvState, rewrite: Optional[Rewrite] = None
) -> np.ndarray:
    """

    :param state: A world state
    :param rewrite: Applied to the raw attributes before scaling
    :return: The network input for the state
    """
    attributes = observe(state)
    if rewrite is not None:
        attributes = rewrite(attributes)
    return encode_attributes(
        attributes, state.spec.height, state.spec.width
    )


def epsilon_schedule(config: DqnConfig, step: int) -> float:
    """

    :param config: The schedule
    :param step: The number of steps taken so far
    :return: ``epsilon_start`` until burn-in ends, then a linear ramp that
        reaches ``epsilon_end`` exactly at ``total_steps``
    """
    if step <= config.burn_in:
        return config.epsilon_start
    if step >= config.total_steps:
        return config.epsilon_end
    fraction = (step - config.burn_in) / (config.total_steps - config.burn_in)
    return config.epsilon_start + fraction * (
        config.epsilon_end - config.epsilon_start
    )


def epsilon_greedy(
        q: QNetworks,
        x: np.ndarray,
        epsilon: float,
        rng: np.random.Generator
) -> Action:
    """

    :param q: The networks to act with
    :param x: An encoded state
    :param epsilon: The probability of a uniformly random action
    :param rng: The random source
    :return: The chosen action. Greedy ties go to the lowest action index
    :raises ValueError: If epsilon is outside ``[0, 1]``
    """
    return _choose(q, x, epsilon, rng)[0]


def greedy(q: QNetworks, x: np.ndarray) -> Action:
    return Action(int(np.argmax(q.values(x))))


def td_targets(q: QNetworks, batch: Batch, gamma: float) -> np.ndarray:
    """

    :param q: The networks; the target network supplies the bootstrap
    :param batch: The sampled records
    :param gamma: The discount
    :return: ``r + gamma * max_a target(s')_a``, or ``r`` for terminal
        records
    """
    bootstrap = q.target.forward(batch.next_states).max(axis=1)
    return batch.rewards + gamma * bootstrap * ~batch.terminals


def td_update(
        q: QNetworks, batch: Batch, gamma: float, optimizer: RMSProp
) -> float:
    """
    One optimizer step on the online network against frozen targets

    :param q: The networks
    :param batch: A nonempty batch of records
    :param gamma: The discount
    :param optimizer: The optimizer of the online network
    :return: The mean squared error on the taken actions, before the step
    :raises ValueError: If the batch is empty
    """
    n = batch.actions.shape[0]
    if n == 0:
        raise ValueError('Cannot update on an empty batch')
    targets = td_targets(q, batch, gamma)
    outputs = q.online.forward(batch.states)
    rows = np.arange(n)
    errors = outputs[rows, batch.actions] - targets
    upstream = np.zeros_like(outputs)
    upstream[rows, batch.actions] = 2.0 * errors / n
    grads, _ = q.online.backward(
        batch.states, upstream, input_gradient=False
    )
    optimizer.step(q.online, grads)
    return float(np.mean(errors * errors))


def sync_target(q: QNetworks) -> None:
    """
    Overwrite the target network with a copy of the online network
    """
    q.sync()


class DqnTrainer(object):
    """
    The bookkeeping of a training run: replay, updates, target syncs and the
    learning curve. Transitions may come from the trainer's own
    epsilon-greedy acting or from outside, such as a planner.
    """
    def __init__(
            self,
            config: DqnConfig,
            rng: np.random.Generator,
            q: Optional[QNetworks] = None,
            learning_starts: Optional[int] = None
    ) -> None:
        """

        :param config: The hyperparameters
        :param rng: The random source for acting, sampling and, if ``q`` is
            omitted, initialization
        :param q: Networks to continue training
        :param learning_starts: Updates happen only after this many steps,
            ``config.burn_in`` if omitted
        """
        config.check()
        self.config = config
        self.rng = rng
        self.q = q if q is not None else QNetworks.initialize(
            rng, config.hidden
        )
        self.buffer = ReplayBuffer(config.capacity)
        self.optimizer = RMSProp(config.step_size)
        self.learning_starts = config.burn_in if learning_starts is None \
            else learning_starts
        self.global_step = 0
        self.episode_index = 0
        self.episode_return = 0.0
        self.curve = []  # type: List[CurvePoint]
        self.random_actions = 0
        self.updates = 0

    def record(
            self,
            transition: Transition,
            height: int,
            width: int,
            epsilon: float,
            phase: str
    ) -> None:
        """
        Store one real transition, then update and sync as scheduled

        :param transition: What happened
        :param height: The number of grid rows, for encoding
        :param width: The number of grid columns, for encoding
        :param epsilon: The exploration rate the action was chosen under
        :param phase: The label of the current training phase
        """
        self.buffer.add(
            encode_attributes(transition.state, height, width),
            transition.action,
            transition.reward,
            encode_attributes(transition.next_state, height, width),
            transition.terminal
        )
        self.global_step += 1
        self.episode_return += transition.reward
        if self.global_step > self.learning_starts and \
                len(self.buffer) >= self.config.batch_size:
            td_update(
                self.q,
                self.buffer.sample(self.config.batch_size, self.rng),
                self.config.gamma, self.optimizer
            )
            self.updates += 1
        if self.global_step % self.config.target_sync_every == 0:
            sync_target(self.q)
        if transition.terminal:
            self.curve.append(CurvePoint(
                self.global_step, self.episode_index, self.episode_return,
                epsilon, phase
            ))
            log.debug(
                'Episode %d ended at step %d with return %g',
                self.episode_index, self.global_step, self.episode_return
            )
            self.episode_index += 1
            self.episode_return = 0.0

    def run(
            self,
            env_factory: EnvFactory,
            steps: int,
            schedule: Callable[[int], float],
            phase: str,
            state: Optional[EnvState] = None
    ) -> EnvState:
        """
        Act epsilon-greedily for a number of steps

        :param env_factory: Makes the initial state of each episode
        :param steps: How many steps to take
        :param schedule: The exploration rate as a function of the number
            of steps taken so far
        :param phase: The label recorded in the learning curve
        :param state: The state to continue from; a new episode starts if
            omitted or terminal
        :return: The state the run ended in
        """
        if state is None or state.terminal:
            state = env_factory()
        for _ in range(steps):
            epsilon = schedule(self.global_step)
            action, explored = _choose(
                self.q, encode_state(state), epsilon, self.rng
            )
            self.random_actions += int(explored)
            transition, outcome = act(state, action)
            self.record(
                transition, state.spec.height, state.spec.width, epsilon,
                phase
            )
            state = env_factory() if outcome.terminal else outcome.next_state
        return state

    def result(self) -> TrainingResult:
        return TrainingResult(
            self.q, list(self.curve), self.random_actions, self.updates
        )


def train_dqn(
        env_factory: EnvFactory,
        config: DqnConfig,
        rng: np.random.Generator
) -> TrainingResult:
    """
    Train from scratch: ``burn_in`` steps at ``epsilon_start`` fill the
    buffer, then every step acts, stores, samples and updates.

    :param env_factory: Makes the initial state of each episode
    :param config: The hyperparameters
    :param rng: The random source
    :return: The networks, the learning curve and the run's counters
    :raises InvalidConfig: If the configuration is invalid
    """
    trainer = DqnTrainer(config, rng)
    trainer.run(
        env_factory, config.total_steps,
        lambda step: epsilon_schedule(config, step), 'dqn'
    )
    log.info(
        'Trained for %d steps: %d episodes, %d updates, %d random actions',
        trainer.global_step, trainer.episode_index, trainer.updates,
        trainer.random_actions
    )
    return trainer.result()


def evaluate_policy(
        q: QNetworks,
        env_factory: EnvFactory,
        episodes: int,
        rewrite: Optional[Rewrite] = None
) -> float:
    """
    Run the greedy policy of the online network

    :param q: The networks
    :param env_factory: Makes the initial state of each episode
    :param episodes: How many episodes to average over
    :param rewrite: Applied to the attributes before encoding, e.g. an
        attribute mapping
    :return: The mean undiscounted episode return
    """
    returns = []  # type: List[float]
    for _ in range(episodes):
        state = env_factory()
        total = 0.0
        while not state.terminal:
            transition, outcome = act(
                state, greedy(q, encode_state(state, rewrite))
            )
            total += transition.reward
            state = outcome.next_state
        returns.append(total)
    return float(np.mean(returns)) if returns else 0.0


def _choose(
        q: QNetworks,
        x: np.ndarray,
        epsilon: float,
        rng: np.random.Generator
) -> Tuple[Action, bool]:
    if not 0 <= epsilon <= 1:
        raise ValueError('Epsilon must lie in [0, 1], got %r' % epsilon)
    if rng.random() < epsilon:
        return Action(int(rng.integers(0, len(Action)))), True
    return greedy(q, x), False
