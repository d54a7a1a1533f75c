"""
Implements one-step dynamics models on the attribute vector. A learned model
answers with the structure learner's outcome networks; a rule model answers
with the rules of the Triggers world, read off the neighbor color.
"""
from typing import Dict, Mapping

import numpy as np

from csm.environments.attributes import Action, NUM_KEYS, neighbor_columns
from csm.environments.attributes import AGENT_X, AGENT_Y
from csm.environments.triggers import CellKind, Palette
from csm.exceptions import MissingActionData
from csm.interfaces import DynamicsModel, Prediction
from csm.structure.notears import NotearsModel


class LearnedDynamics(DynamicsModel):
    """
    Predicts with one fitted structure model per action
    """
    def __init__(self, models: Mapping[Action, NotearsModel]) -> None:
        """

        :param models: A fitted model for every action
        :raises MissingActionData: If an action has no model
        """
        for action in Action:
            if action not in models:
                raise MissingActionData(
                    'No model for action %s' % action.label, action
                )
        self._models = dict(models)  # type: Dict[Action, NotearsModel]

    @property
    def models(self) -> Dict[Action, NotearsModel]:
        return self._models

    def predict(self, attributes: np.ndarray, action: Action) -> Prediction:
        return self._models[Action(action)].predict(attributes)

    def __repr__(self) -> str:
        return '{0}(actions={1})'.format(
            self.__class__.__name__,
            [action.label for action in sorted(self._models)]
        )


class RuleDynamics(DynamicsModel):
    """
    The exact Triggers rules, evaluated on the attribute vector under a
    palette. The neighbor in the direction of the action decides the outcome:
    free space and keys let the agent through, walls block it, and locks
    either pay ``+1`` and let it through or cost ``-1`` while keys remain.
    Colors the palette does not use behave like walls.
    """
    def __init__(self, palette: Palette = Palette.default()) -> None:
        self._palette = palette

    @property
    def palette(self) -> Palette:
        return self._palette

    def predict(self, attributes: np.ndarray, action: Action) -> Prediction:
        action = Action(action)
        x_column, y_column, color_column = neighbor_columns(action)
        here = (int(attributes[AGENT_X]), int(attributes[AGENT_Y]))
        there = (int(attributes[x_column]), int(attributes[y_column]))
        kind = self._palette.kind_of(int(attributes[color_column]))
        if kind in (CellKind.FREE, CellKind.KEY):
            return Prediction(0.0, there)
        if kind == CellKind.LOCK:
            if attributes[NUM_KEYS] > 0:
                return Prediction(-1.0, here)
            return Prediction(1.0, there)
        return Prediction(0.0, here)

    def __repr__(self) -> str:
        return '{0}({1!r})'.format(self.__class__.__name__, self._palette)
