"""Uniform experience replay over preallocated ring storage.

Actions are stored as float vectors: 0/1 bits for the Q-learning agents,
the continuous pre-threshold policy output for bin-DDPG. Oldest entries are
overwritten first; sampling is uniform with replacement.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError


@dataclass
class Transition:
    obs: np.ndarray
    action: np.ndarray
    reward: float
    next_obs: np.ndarray


class ReplayBuffer:
    def __init__(self, capacity: int, obs_dim: int, action_dim: int):
        if capacity < 1:
            raise ConfigError(f"capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._obs = np.zeros((capacity, obs_dim))
        self._action = np.zeros((capacity, action_dim))
        self._reward = np.zeros(capacity)
        self._next_obs = np.zeros((capacity, obs_dim))
        self._size = 0
        self._head = 0

    def __len__(self) -> int:
        return self._size

    def push(self, obs, action, reward: float, next_obs) -> None:
        i = self._head
        self._obs[i] = obs
        self._action[i] = action
        self._reward[i] = reward
        self._next_obs[i] = next_obs
        self._head = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def sample(self, batch_size: int, rng: np.random.Generator):
        """(obs, action, reward, next_obs) batches; uniform with replacement."""
        if self._size < batch_size:
            return None
        idx = rng.integers(0, self._size, size=batch_size)
        return (self._obs[idx], self._action[idx], self._reward[idx],
                self._next_obs[idx])

    def get(self, i: int) -> Transition:
        """i-th stored transition, oldest first."""
        if not 0 <= i < self._size:
            raise IndexError(i)
        if self._size < self.capacity:
            j = i
        else:
            j = (self._head + i) % self.capacity
        return Transition(obs=self._obs[j].copy(), action=self._action[j].copy(),
                          reward=float(self._reward[j]),
                          next_obs=self._next_obs[j].copy())
