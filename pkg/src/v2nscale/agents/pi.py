"""Proportional-integral controller tracking a max-load setpoint."""

import math
from dataclasses import dataclass

from ..simenv import Observation
from .base import Policy, clamp_to_action_space


@dataclass(frozen=True)
class PiConfig:
    rho: float = 0.6            # utilization setpoint for the most loaded CPU
    kp: float = 2.5
    ki: float = 0.1
    windup_limit: float = 5.0   # |integral| clamp


class PiController(Policy):
    def __init__(self, action_limit: int, config: PiConfig = PiConfig()):
        self.action_limit = action_limit
        self.config = config
        self.integral = 0.0

    def begin_episode(self) -> None:
        self.integral = 0.0

    def act(self, obs: Observation) -> int:
        c = self.config
        error = obs.max_load - c.rho
        self.integral = min(max(self.integral + error, -c.windup_limit), c.windup_limit)
        raw = (c.kp * error + c.ki * self.integral) * obs.n_active
        action = int(math.floor(raw + 0.5))  # nearest integer, halves toward +inf
        return clamp_to_action_space(action, self.action_limit)
