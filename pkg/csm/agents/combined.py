"""
Implements the model-based plus model-free agent. A random-shooting planner
drives the first phase; every real transition it takes goes into the replay
buffer and trains the Q-network as it arrives. The second phase is ordinary
Q-learning at a fixed, small exploration rate, continuing from the same
networks and buffer.
"""
import logging
from typing import NamedTuple, Optional

import numpy as np

from csm.agents.dqn import DqnConfig, DqnTrainer, EnvFactory, TrainingResult
from csm.environments.triggers import EnvState
from csm.exceptions import InvalidConfig
from csm.interfaces import DynamicsOracle
from csm.planning.shooting import PlanConfig, iterate_plan

log = logging.getLogger(__name__)


class CombinedConfig(NamedTuple):
    plan_steps: int = 5000
    dqn_steps: int = 20000
    epsilon: float = 0.05

    def check(self) -> None:
        """
        :raises InvalidConfig: If a count is negative or epsilon is outside
            ``[0, 1]``
        """
        if self.plan_steps < 0 or self.dqn_steps < 0:
            raise InvalidConfig('Phase lengths must be nonnegative')
        if not 0 <= self.epsilon <= 1:
            raise InvalidConfig(
                'Epsilon must lie in [0, 1], got %g' % self.epsilon
            )


def train_combined(
        env_factory: EnvFactory,
        oracle: DynamicsOracle,
        config: DqnConfig,
        plan_config: PlanConfig,
        rng: np.random.Generator,
        combined: CombinedConfig = CombinedConfig()
) -> TrainingResult:
    """

    :param env_factory: Makes the initial state of each episode
    :param oracle: The simulator the planner rolls out, usually a
        :class:`~csm.planning.oracles.ModelOracle` over learned models
    :param config: The Q-learning hyperparameters. ``burn_in`` and the
        epsilon schedule are not used; updates start as soon as the buffer
        holds a batch
    :param plan_config: The planning budget
    :param rng: The random source
    :param combined: The lengths of the two phases and the phase-two
        exploration rate
    :return: The networks, one learning curve over both phases, and the
        run's counters
    """
    combined.check()
    trainer = DqnTrainer(config, rng, learning_starts=0)
    state = None  # type: Optional[EnvState]
    for transition, outcome in iterate_plan(
            env_factory, oracle, plan_config, rng, combined.plan_steps
    ):
        spec = outcome.next_state.spec
        trainer.record(transition, spec.height, spec.width, 0.0, 'plan')
        state = outcome.next_state
    log.info(
        'Planning phase done: %d steps, %d episodes',
        trainer.global_step, trainer.episode_index
    )
    trainer.run(
        env_factory, combined.dqn_steps, lambda step: combined.epsilon, 'dqn',
        state
    )
    log.info(
        'Combined run done: %d steps, %d updates, %d random actions',
        trainer.global_step, trainer.updates, trainer.random_actions
    )
    return trainer.result()
