"""
Describes one-step dynamics models of the Triggers world. A model answers the
question "what reward does the agent get, and where does it end up, if it
takes this action from this attribute vector?". An oracle answers the same
question for a full world state, keeping track of which keys and locks have
been consumed so that multi-step rollouts stay consistent.
"""
import abc
from typing import NamedTuple, Tuple, TYPE_CHECKING

import numpy as np

from csm.environments.attributes import Action

if TYPE_CHECKING:
    from csm.environments.triggers import EnvState, StepOutcome


class Prediction(NamedTuple):
    reward: float
    next_pos: Tuple[int, int]


class DynamicsModel(object, metaclass=abc.ABCMeta):
    """
    Base class for predictors working on the object-oriented attribute vector
    """
    @abc.abstractmethod
    def predict(self, attributes: np.ndarray, action: Action) -> Prediction:
        """

        :param attributes: The 16 time-``t`` attributes in canonical order
        :param action: The action taken
        :return: The predicted reward and the predicted agent position after
            acting, rounded to grid cells
        """
        raise NotImplementedError()


class DynamicsOracle(object, metaclass=abc.ABCMeta):
    """
    Base class for simulators used by planners. An oracle must be total over
    all four actions.
    """
    @abc.abstractmethod
    def transition(self, state: 'EnvState', action: Action) -> 'StepOutcome':
        """

        :param state: A non-terminal state
        :param action: The action to simulate
        :return: The simulated outcome. The next state is a shadow of the
            real world: whatever the oracle believes happened
        """
        raise NotImplementedError()
