"""
Implements random-shooting model-predictive control. At every real step the
planner scores a handful of random action sequences under an oracle and
executes the first action of the best one.
"""
import itertools
import logging
from typing import Callable, Iterable, Iterator, List, NamedTuple
from typing import Optional, Tuple

import numpy as np

from csm.environments.attributes import Action
from csm.environments.triggers import EnvState, StepOutcome, Transition, act
from csm.exceptions import InvalidConfig, SteppedTerminal
from csm.interfaces import DynamicsOracle

log = logging.getLogger(__name__)

EnvFactory = Callable[[], EnvState]


class PlanConfig(NamedTuple):
    """
    ``num_sequences`` random sequences of ``horizon`` actions are scored per
    step. With ``exhaustive`` set, all ``4 ** horizon`` sequences are scored
    in lexicographic order instead, and ``num_sequences`` is ignored.
    """
    num_sequences: int = 5
    horizon: int = 100
    seed: int = 0
    exhaustive: bool = False

    def check(self) -> None:
        """
        :raises InvalidConfig: If a count is below 1
        """
        if self.num_sequences < 1 or self.horizon < 1:
            raise InvalidConfig(
                'Need num_sequences >= 1 and horizon >= 1, got %d and %d' % (
                    self.num_sequences, self.horizon
                )
            )


def rollout_value(
        oracle: DynamicsOracle, start: EnvState, actions: Iterable[Action]
) -> float:
    """
    Simulate an action sequence and add up its rewards, without discounting.
    The rollout stops early at the first terminal state.

    :param oracle: The simulator
    :param start: The state to start from
    :param actions: The actions to take in order
    :return: The cumulative predicted reward
    """
    total = 0.0
    state = start
    for action in actions:
        if state.terminal:
            break
        outcome = oracle.transition(state, action)
        total += outcome.reward
        state = outcome.next_state
    return total


def candidate_sequences(
        config: PlanConfig, rng: np.random.Generator
) -> Iterator[Tuple[Action, ...]]:
    """
    Draw the sequences a planning step scores. Each random sequence comes
    from its own draw, so raising ``num_sequences`` extends the same stream.

    :param config: How many sequences of which length
    :param rng: The random source
    :return: The sequences, in scoring order
    """
    if config.exhaustive:
        yield from itertools.product(Action, repeat=config.horizon)
        return
    for _ in range(config.num_sequences):
        yield tuple(
            Action(code)
            for code in rng.integers(0, len(Action), size=config.horizon)
        )


def best_sequence(
        oracle: DynamicsOracle,
        start: EnvState,
        config: PlanConfig,
        rng: np.random.Generator
) -> Tuple[float, Tuple[Action, ...]]:
    """

    :param oracle: The simulator
    :param start: A non-terminal state
    :param config: The planning budget
    :param rng: The random source
    :return: The best value found and the sequence achieving it. Ties go to
        the sequence scored first
    :raises SteppedTerminal: If the start state is terminal
    """
    if start.terminal:
        raise SteppedTerminal('Cannot plan from a terminal state %r' % start)
    best_value = -np.inf
    best = ()  # type: Tuple[Action, ...]
    for sequence in candidate_sequences(config, rng):
        value = rollout_value(oracle, start, sequence)
        if value > best_value:
            best_value, best = value, sequence
    return best_value, best


def shoot(
        oracle: DynamicsOracle,
        start: EnvState,
        config: PlanConfig,
        rng: np.random.Generator
) -> Action:
    """

    :param oracle: The simulator
    :param start: A non-terminal state
    :param config: The planning budget
    :param rng: The random source
    :return: The first action of the best sequence
    :raises SteppedTerminal: If the start state is terminal
    """
    return best_sequence(oracle, start, config, rng)[1][0]


def iterate_plan(
        env_factory: EnvFactory,
        oracle: DynamicsOracle,
        config: PlanConfig,
        rng: np.random.Generator,
        steps: Optional[int] = None
) -> Iterator[Tuple[Transition, StepOutcome]]:
    """
    Act in the real world by random shooting, starting a new episode from
    ``env_factory`` whenever one ends

    :param env_factory: Makes the initial state of each episode
    :param oracle: The simulator used for planning
    :param config: The planning budget
    :param rng: The random source
    :param steps: How many real steps to take, unbounded if ``None``
    :return: Each recorded transition with its raw outcome
    """
    config.check()
    counter = itertools.count() if steps is None else range(steps)
    state = env_factory()
    for _ in counter:
        if state.terminal:
            state = env_factory()
        action = shoot(oracle, state, config, rng)
        transition, outcome = act(state, action)
        yield transition, outcome
        state = outcome.next_state


def plan_phase(
        env_factory: EnvFactory,
        oracle: DynamicsOracle,
        config: PlanConfig,
        steps: int,
        rng: np.random.Generator
) -> List[Transition]:
    """

    :param env_factory: Makes the initial state of each episode
    :param oracle: The simulator used for planning
    :param config: The planning budget
    :param steps: How many real steps to take
    :param rng: The random source
    :return: The transitions actually taken, in order
    """
    transitions = [
        transition for transition, _ in iterate_plan(
            env_factory, oracle, config, rng, steps
        )
    ]
    log.info('Planned %d real steps with %r', len(transitions), oracle)
    return transitions

