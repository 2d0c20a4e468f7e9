"""Ornstein-Uhlenbeck exploration noise for the continuous raw action."""

import numpy as np


class OUNoise:
    def __init__(self, rng: np.random.Generator, theta: float = 0.15,
                 sigma: float = 0.2, dt: float = 1.0, mu: float = 0.0):
        self.rng = rng
        self.theta = theta
        self.sigma = sigma
        self.dt = dt
        self.mu = mu
        self.state = mu

    def reset(self) -> None:
        self.state = self.mu

    def sample(self) -> float:
        dx = (self.theta * (self.mu - self.state) * self.dt
              + self.sigma * np.sqrt(self.dt) * self.rng.standard_normal())
        self.state += dx
        return self.state
