"""Tabular Q-learning over (N, binned W) with the +-1/0 action set."""

import math
from dataclasses import dataclass

import numpy as np

from ..simenv import EnvConfig, Observation, Transition
from .base import Policy

Q_ACTIONS = (-1, 0, 1)


@dataclass(frozen=True)
class QLearnConfig:
    step_size: float = 0.1
    epsilon_start: float = 1.0
    epsilon_final: float = 0.05
    total_train_steps: int = 2000 * 288  # horizon for the linear epsilon decay


class QTableAgent(Policy):
    def __init__(self, env: EnvConfig, config: QLearnConfig = QLearnConfig(),
                 rng: np.random.Generator | None = None):
        if rng is None:
            rng = np.random.default_rng(env.seed)
        self.env_config = env
        self.config = config
        self.n_max = env.n_max
        self.gamma = env.gamma
        self.rng = rng
        self.table: dict[tuple[int, int], np.ndarray] = {}
        self.step_count = 0
        self.train_mode = True

    def state_key(self, obs: Observation) -> tuple[int, int]:
        w_bin = min(int(math.floor(obs.workload)), self.n_max)
        return (obs.n_active, w_bin)

    def _values(self, key: tuple[int, int]) -> np.ndarray:
        values = self.table.get(key)
        if values is None:
            values = np.zeros(len(Q_ACTIONS))
            self.table[key] = values
        return values

    def epsilon(self) -> float:
        c = self.config
        if c.total_train_steps <= 0:
            return c.epsilon_final
        frac = min(1.0, self.step_count / c.total_train_steps)
        return c.epsilon_start + (c.epsilon_final - c.epsilon_start) * frac

    def act(self, obs: Observation) -> int:
        if self.train_mode and self.rng.random() < self.epsilon():
            return int(self.rng.choice(Q_ACTIONS))
        values = self._values(self.state_key(obs))
        return Q_ACTIONS[int(np.argmax(values))]

    def observe(self, transition: Transition) -> None:
        self.step_count += 1
        self.q_update(transition)

    def q_update(self, transition: Transition) -> None:
        action = transition.effective_action
        if action not in Q_ACTIONS:
            raise ValueError(f"action {action} outside {Q_ACTIONS}")
        key = self.state_key(transition.obs)
        next_key = self.state_key(transition.next_obs)
        values = self._values(key)
        best_next = float(self._values(next_key).max())
        i = Q_ACTIONS.index(action)
        td_target = transition.reward + self.gamma * best_next
        values[i] += self.config.step_size * (td_target - values[i])
