"""
Implements the simulators the planner rolls action sequences through. The
ground-truth oracle is the world itself. The model oracle asks a dynamics
model for the reward and the next agent position, and keeps a shadow copy of
the world in which consumed keys and opened locks disappear, so that later
steps of a rollout see what the model believes happened.
"""
from typing import Tuple

import numpy as np

from csm.environments.attributes import Action
from csm.environments.triggers import CellKind, EnvState, Position
from csm.environments.triggers import StepOutcome, observe, step
from csm.exceptions import SteppedTerminal
from csm.interfaces import DynamicsModel, DynamicsOracle


class GroundTruthOracle(DynamicsOracle):
    """
    Simulates with the real transition function
    """
    def transition(self, state: EnvState, action: Action) -> StepOutcome:
        return step(state, action)

    def __repr__(self) -> str:
        return '{0}()'.format(self.__class__.__name__)


class ModelOracle(DynamicsOracle):
    """
    Simulates with a dynamics model. Predictions are snapped to the world:

    * the reward is rounded to the nearest of ``-1``, ``0`` and ``+1``
    * the position is rounded and clamped to the grid
    * a predicted ``+1`` opens the lock in the direction of the action, if
      one is there
    * a move onto a wall or a closed lock leaves the agent where it was
    * entering a cell holding a key consumes the key
    """
    def __init__(self, model: DynamicsModel) -> None:
        """

        :param model: The one-step predictor to roll out
        """
        self._model = model

    @property
    def model(self) -> DynamicsModel:
        return self._model

    def transition(self, state: EnvState, action: Action) -> StepOutcome:
        """

        :param state: A non-terminal shadow state
        :param action: The action to simulate
        :return: The snapped prediction and the updated shadow state
        :raises SteppedTerminal: If the state is terminal
        """
        if state.terminal:
            raise SteppedTerminal('Cannot act in a terminal state %r' % state)
        action = Action(action)
        prediction = self._model.predict(observe(state), action)
        reward = int(np.clip(np.rint(prediction.reward), -1, 1))
        target = _clamp(prediction.next_pos, state)

        alive_keys = state.alive_keys
        alive_locks = state.alive_locks
        if reward == 1:
            drow, dcol = action.delta
            row, col = state.agent_pos
            alive_locks = alive_locks - {(row + drow, col + dcol)}
        shadow = state.replace(alive_locks=alive_locks)
        if shadow.kind_at(target) in (CellKind.WALL, CellKind.LOCK):
            target = state.agent_pos
        elif target in alive_keys:
            alive_keys = alive_keys - {target}

        next_state = shadow.replace(
            agent_pos=target,
            alive_keys=alive_keys,
            step_count=state.step_count + 1
        )
        return StepOutcome(next_state, reward, next_state.terminal)

    def __repr__(self) -> str:
        return '{0}({1!r})'.format(self.__class__.__name__, self._model)


def _clamp(position: Tuple[int, int], state: EnvState) -> Position:
    return (
        min(max(int(position[0]), 0), state.spec.height - 1),
        min(max(int(position[1]), 0), state.spec.width - 1)
    )
