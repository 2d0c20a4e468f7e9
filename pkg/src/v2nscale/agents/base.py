"""Policy interface and the non-learning reference policies."""

import math

import numpy as np

from ..simenv import EnvConfig, Observation, Transition


def obs_vector(obs: Observation, n_max: int) -> np.ndarray:
    """Network input: (N, W) scaled by n_max into activation-friendly range."""
    return np.array([obs.n_active / n_max, obs.workload / n_max])


def clamp_to_action_space(action: int, action_limit: int) -> int:
    return int(min(max(action, -action_limit), action_limit))


class Policy:
    """Maps observations to integer scaling actions in A.

    ``observe`` feeds one transition back to learning policies; it is only
    called while ``train_mode`` is on. ``begin_episode`` resets any
    per-episode state (exploration noise, controller integrator, history).
    """

    train_mode: bool = False

    def act(self, obs: Observation) -> int:
        raise NotImplementedError

    def observe(self, transition: Transition) -> None:
        pass

    def begin_episode(self) -> None:
        pass

    def freeze(self) -> None:
        self.train_mode = False


class ConstantPolicy(Policy):
    def __init__(self, action: int = 0):
        self.action = int(action)

    def act(self, obs: Observation) -> int:
        return self.action


class OraclePolicy(Policy):
    """Clairvoyant benchmark: sees the next slot's workload and provisions
    one CPU per unit of it. Test/benchmark reference only."""

    def __init__(self, env: EnvConfig):
        self.n_max = env.n_max
        self.action_limit = env.action_limit

    def act(self, obs: Observation) -> int:
        upcoming = obs.next_workload if obs.next_workload is not None else obs.workload
        target = min(self.n_max, max(1, math.ceil(upcoming)))
        return clamp_to_action_space(target - obs.n_active, self.action_limit)
