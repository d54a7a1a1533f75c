"""
Implements a fixed-capacity experience replay buffer backed by preallocated
arrays. Once full, each new record overwrites the oldest one.
"""
from typing import NamedTuple

import numpy as np

from csm.environments.attributes import STATE_DIM


class Batch(NamedTuple):
    states: np.ndarray
    actions: np.ndarray
    rewards: np.ndarray
    next_states: np.ndarray
    terminals: np.ndarray


class ReplayBuffer(object):
    """
    A ring of ``(state, action, reward, next_state, terminal)`` records
    """
    def __init__(self, capacity: int, state_dim: int = STATE_DIM) -> None:
        """

        :param capacity: The most records the buffer holds
        :param state_dim: The length of the encoded state vectors
        :raises ValueError: If the capacity is not positive
        """
        if capacity < 1:
            raise ValueError('Capacity must be positive, got %d' % capacity)
        self._capacity = int(capacity)
        self._states = np.zeros((capacity, state_dim))
        self._actions = np.zeros(capacity, dtype=np.int64)
        self._rewards = np.zeros(capacity)
        self._next_states = np.zeros((capacity, state_dim))
        self._terminals = np.zeros(capacity, dtype=bool)
        self._size = 0
        self._next = 0

    @property
    def capacity(self) -> int:
        return self._capacity

    def add(
            self,
            state: np.ndarray,
            action: int,
            reward: float,
            next_state: np.ndarray,
            terminal: bool
    ) -> None:
        index = self._next
        self._states[index] = state
        self._actions[index] = int(action)
        self._rewards[index] = reward
        self._next_states[index] = next_state
        self._terminals[index] = terminal
        self._next = (index + 1) % self._capacity
        self._size = min(self._size + 1, self._capacity)

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        """

        :param batch_size: The number of records to draw, with replacement
        :param rng: The random source
        :return: The drawn records
        :raises ValueError: If the buffer is empty
        """
        if self._size == 0:
            raise ValueError('Cannot sample from an empty replay buffer')
        return self._take(rng.integers(0, self._size, size=batch_size))

    def contents(self) -> Batch:
        """

        :return: Every record held, oldest first
        """
        start = self._next if self._size == self._capacity else 0
        return self._take(
            (start + np.arange(self._size)) % self._capacity
        )

    def _take(self, indices: np.ndarray) -> Batch:
        return Batch(
            self._states[indices],
            self._actions[indices],
            self._rewards[indices],
            self._next_states[indices],
            self._terminals[indices]
        )

    def __len__(self) -> int:
        return self._size

    def __repr__(self) -> str:
        return '{0}(size={1}, capacity={2})'.format(
            self.__class__.__name__, self._size, self._capacity
        )
