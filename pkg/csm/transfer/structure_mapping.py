"""
Implements structure mapping: reuse a source world's dynamics model and
Q-network in a target world whose objects are drawn in different colors.
The agent acts in the target world and checks every outcome against what the
source model predicts. When a prediction fails, the offending neighbor's
color is tried in place of each source color until one reproduces the
observation, and the target color is mapped to it. Once every color seen so
far behaves as mapped, the source model and policy apply to the target
unchanged.
"""
import logging
from typing import Iterable, List, NamedTuple, Optional, Set

import numpy as np

from csm.agents.dqn import EnvFactory, QNetworks, encode_state
from csm.agents.dqn import epsilon_greedy, evaluate_policy
from csm.environments.attributes import Action, neighbor_color_column
from csm.environments.attributes import neighbor_columns
from csm.environments.triggers import Palette, act
from csm.exceptions import InvalidConfig, UnresolvableMismatch
from csm.interfaces import DynamicsModel, Prediction
from csm.transfer.mapping import AttributeMapping, CategoryGroups, Evidence
from csm.transfer.mapping import MismatchEvent

log = logging.getLogger(__name__)


class TransferConfig(NamedTuple):
    """
    ``t0`` bounds the number of real target steps, ``epsilon`` is the
    exploration rate of the source policy while mapping
    """
    t0: int = 500
    epsilon: float = 0.2

    def check(self) -> None:
        """
        :raises InvalidConfig: If ``t0`` is below 1 or epsilon is outside
            ``[0, 1]``
        """
        if self.t0 < 1:
            raise InvalidConfig('t0 must be at least 1, got %d' % self.t0)
        if not 0 <= self.epsilon <= 1:
            raise InvalidConfig(
                'Epsilon must lie in [0, 1], got %g' % self.epsilon
            )


class TransferResult(NamedTuple):
    mapping: AttributeMapping
    groups: CategoryGroups
    trace: List[MismatchEvent]
    steps: int


class MappedDynamics(DynamicsModel):
    """
    A source model seen through an attribute mapping
    """
    def __init__(
            self, model: DynamicsModel, mapping: AttributeMapping
    ) -> None:
        self._model = model
        self._mapping = mapping

    @property
    def mapping(self) -> AttributeMapping:
        return self._mapping

    def predict(self, attributes: np.ndarray, action: Action) -> Prediction:
        return predict_with_mapping(
            self._model, self._mapping, attributes, action
        )

    def __repr__(self) -> str:
        return '{0}({1!r}, {2!r})'.format(
            self.__class__.__name__, self._model, self._mapping
        )


def predict_with_mapping(
        model: DynamicsModel,
        mapping: AttributeMapping,
        attributes: np.ndarray,
        action: Action
) -> Prediction:
    """

    :param model: The source dynamics model
    :param mapping: The target-to-source color mapping
    :param attributes: The 16 time-``t`` attributes of the target world
    :param action: The action taken
    :return: The source model's prediction on the rewritten attributes
    """
    return model.predict(mapping.rewrite(attributes), action)


def find_source_match(
        model: DynamicsModel,
        mismatch: MismatchEvent,
        known_source_colors: Iterable[int],
        mapping: Optional[AttributeMapping] = None
) -> Optional[int]:
    """
    Look for the source color whose predicted behavior, in place of the
    offending neighbor, reproduces the observed outcome

    :param model: The source dynamics model
    :param mismatch: The failed prediction
    :param known_source_colors: The source colors to try
    :param mapping: Applied to the other colors of the state first. Source
        colors it already assigns to another target color are skipped
    :return: The smallest matching source color, or ``None`` if none
        matches
    """
    color_column = neighbor_color_column(mismatch.action)
    state = mismatch.state if mapping is None else \
        mapping.rewrite(mismatch.state)
    for candidate in sorted(known_source_colors):
        if mapping is not None and mapping.target_of(candidate) not in (
                None, mismatch.offending_color
        ):
            continue
        substituted = np.array(state, dtype=np.float64)
        substituted[color_column] = candidate
        if _agrees(
                model.predict(substituted, mismatch.action), mismatch.observed
        ):
            return candidate
    return None


def structure_map(
        model: DynamicsModel,
        source_q: QNetworks,
        env_factory: EnvFactory,
        rng: np.random.Generator,
        config: TransferConfig = TransferConfig(),
        mapping: Optional[AttributeMapping] = None,
        source_palette: Palette = Palette.default(),
        known_source_colors: Optional[Iterable[int]] = None
) -> TransferResult:
    """
    Act in the target world with the source policy, mapping target colors
    whenever the source model mispredicts. After each new entry every
    recorded mismatch is replayed; the run stops early once that replay is
    clean and every color of the target layout has either behaved as
    predicted or been mapped.

    :param model: The source dynamics model
    :param source_q: The source Q-networks, applied to rewritten states
    :param env_factory: Makes the initial state of each target episode
    :param rng: The random source
    :param config: The step budget and the exploration rate
    :param mapping: A mapping to start from, empty if omitted
    :param source_palette: The source palette, used to label groups and to
        choose candidate colors
    :param known_source_colors: The candidate source colors, the source
        palette's object colors if omitted
    :return: The mapping, the behavior groups, the mismatch trace and the
        number of steps taken
    :raises UnresolvableMismatch: If no source color reproduces an observed
        outcome
    """
    config.check()
    mapping = AttributeMapping() if mapping is None else mapping.copy()
    mapped = MappedDynamics(model, mapping)
    candidates = sorted(
        source_palette.object_colors if known_source_colors is None
        else known_source_colors
    )
    trace = []  # type: List[MismatchEvent]
    consistent = set()  # type: Set[int]
    clean = True

    state = env_factory()
    known = set(state.spec.colors())
    steps = 0
    while steps < config.t0:
        if state.terminal:
            state = env_factory()
            known |= state.spec.colors()
        action = epsilon_greedy(
            source_q, encode_state(state, mapping.rewrite), config.epsilon,
            rng
        )
        transition, outcome = act(state, action)
        steps += 1
        observed = Prediction(float(transition.reward), transition.agent_next)
        predicted = mapped.predict(transition.state, action)
        x_column, y_column, color_column = neighbor_columns(action)
        color = int(transition.state[color_column])
        if _agrees(predicted, observed):
            consistent.add(color)
        else:
            event = MismatchEvent(
                steps, transition.state, action, observed, predicted,
                (int(transition.state[x_column]),
                 int(transition.state[y_column])),
                color
            )
            trace.append(event)
            source = find_source_match(model, event, candidates, mapping)
            if source is None:
                raise UnresolvableMismatch(
                    'Target color %d behaves like none of the free source '
                    'colors %s (action %s, observed %s)' % (
                        color, candidates, action.label, observed
                    ),
                    event
                )
            mapping.set(color, source, Evidence(
                steps, action, observed.reward, observed.next_pos
            ))
            log.info(
                'Step %d: mapped target color %d to source color %d',
                steps, color, source
            )
            clean = all(
                _agrees(mapped.predict(past.state, past.action), past.observed)
                for past in trace
            )
        state = outcome.next_state
        if clean and known <= consistent | set(mapping):
            log.info('Every target color accounted for after %d steps', steps)
            break

    groups = CategoryGroups.from_mapping(mapping, consistent, source_palette)
    return TransferResult(mapping, groups, trace, steps)


def transfer_policy_eval(
        source_q: QNetworks,
        mapping: AttributeMapping,
        env_factory: EnvFactory,
        episodes: int
) -> float:
    """

    :param source_q: The source Q-networks
    :param mapping: The target-to-source color mapping
    :param env_factory: Makes the initial state of each target episode
    :param episodes: How many episodes to average over
    :return: The mean return of the greedy source policy on rewritten
        target states
    """
    return evaluate_policy(source_q, env_factory, episodes, mapping.rewrite)


def _agrees(predicted: Prediction, observed: Prediction) -> bool:
    return int(np.rint(predicted.reward)) == int(np.rint(observed.reward)) \
        and tuple(predicted.next_pos) == tuple(observed.next_pos)
