"""
Implements data collection for structure learning: a uniformly random policy
acting in freshly drawn layouts of varying size, recorded until every action
has been taken often enough
"""
import logging
from typing import Dict, Iterator, Tuple

import numpy as np

from csm.environments.attributes import Action
from csm.environments.layouts import random_layout
from csm.environments.triggers import DEFAULT_MAX_STEPS, act, reset
from csm.serialization import LogRecord

log = logging.getLogger(__name__)


def collect(
        rng: np.random.Generator,
        samples_per_action: int,
        min_size: int = 5,
        max_size: int = 20,
        key_range: Tuple[int, int] = (1, 2),
        lock_range: Tuple[int, int] = (1, 2),
        max_steps: int = DEFAULT_MAX_STEPS
) -> Iterator[LogRecord]:
    """
    Each episode draws a square layout whose side is uniform in
    ``[min_size, max_size]``, with key and lock counts uniform in their
    ranges, and acts uniformly at random until the episode ends. Collection
    stops as soon as every action has at least ``samples_per_action`` rows.

    :param rng: The random source
    :param samples_per_action: The number of rows wanted for each action
    :param min_size: The smallest grid side, at least 5
    :param max_size: The largest grid side
    :param key_range: The smallest and largest number of keys per layout
    :param lock_range: The smallest and largest number of locks per layout
    :param max_steps: The step budget of each episode
    :return: The recorded rows, labelled by episode and step
    :raises LayoutInfeasible: If a layout cannot be drawn
    """
    counts = {action: 0 for action in Action}  # type: Dict[Action, int]
    grid_id = 0
    while min(counts.values()) < samples_per_action:
        size = int(rng.integers(min_size, max_size + 1))
        n_keys = int(rng.integers(key_range[0], key_range[1] + 1))
        n_locks = int(rng.integers(lock_range[0], lock_range[1] + 1))
        spec = random_layout(rng, size, size, n_keys, n_locks)
        state = reset(spec, max_steps)
        step = 0
        while not state.terminal and \
                min(counts.values()) < samples_per_action:
            action = Action(int(rng.integers(0, len(Action))))
            transition, outcome = act(state, action)
            yield LogRecord(grid_id, step, transition)
            counts[action] += 1
            step += 1
            state = outcome.next_state
        log.debug(
            'Grid %d (%dx%d, %d keys, %d locks) gave %d rows',
            grid_id, size, size, n_keys, n_locks, step
        )
        grid_id += 1
    log.info(
        'Collected %d rows over %d grids', sum(counts.values()), grid_id
    )
