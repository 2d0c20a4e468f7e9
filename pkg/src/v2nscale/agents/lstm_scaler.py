"""Predictive scaler: LSTM one-step workload forecast, provision its ceiling."""

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from ..neural import Adam, Lstm, LstmSpec
from ..simenv import EnvConfig, Observation
from ..trace import WorkloadSeries
from .base import Policy, clamp_to_action_space


@dataclass(frozen=True)
class LstmScalerConfig:
    lookback: int = 3
    layers: int = 2
    hidden_size: int = 4
    headroom: float = 1.0       # provision ceil(headroom * forecast)
    lr: float = 3e-3
    batch_size: int = 32


def make_windows(values: np.ndarray, lookback: int) -> tuple[np.ndarray, np.ndarray]:
    """Sliding (window, next value) pairs: x shaped (n, lookback, 1), y (n, 1)."""
    values = np.asarray(values, dtype=np.float64)
    n = len(values) - lookback
    if n < 1:
        raise ValueError(f"series of length {len(values)} too short for "
                         f"lookback {lookback}")
    x = np.stack([values[i:i + lookback] for i in range(n)])[:, :, None]
    y = values[lookback:][:, None]
    return x, y


class LstmScaler(Policy):
    def __init__(self, env: EnvConfig, config: LstmScalerConfig = LstmScalerConfig(),
                 rng: np.random.Generator | None = None):
        if rng is None:
            rng = np.random.default_rng(env.seed)
        self.env_config = env
        self.config = config
        self.n_max = env.n_max
        self.action_limit = env.action_limit
        self.scale = float(env.n_max)  # workload normalization for the network
        self.rng = rng
        self.predictor = Lstm(LstmSpec(1, config.layers, config.hidden_size, 1), rng)
        self.opt = Adam(lr=config.lr)
        self.history: deque = deque(maxlen=config.lookback)

    def begin_episode(self) -> None:
        self.history.clear()

    def predict(self, window: np.ndarray) -> float:
        x = (np.asarray(window, dtype=np.float64) / self.scale)[None, :, None]
        y, _ = self.predictor.forward(x)
        return float(y[0, 0]) * self.scale

    def act(self, obs: Observation) -> int:
        if not self.history:
            self.history.extend([obs.workload] * self.config.lookback)
        else:
            self.history.append(obs.workload)
        forecast = self.predict(np.array(self.history))
        target = min(self.n_max, max(1, math.ceil(self.config.headroom * forecast)))
        return clamp_to_action_space(target - obs.n_active, self.action_limit)

    def fit_windows(self, x: np.ndarray, y: np.ndarray, epochs: int) -> list[float]:
        """Mini-batch MSE regression; returns full-set loss after each epoch.

        Inputs are in workload units; scaling happens here.
        """
        x = np.asarray(x, dtype=np.float64) / self.scale
        y = np.asarray(y, dtype=np.float64) / self.scale
        n = len(x)
        losses = []
        for _ in range(epochs):
            order = self.rng.permutation(n)
            for start in range(0, n, self.config.batch_size):
                sel = order[start:start + self.config.batch_size]
                out, cache = self.predictor.forward(x[sel])
                grads, _ = self.predictor.backward(cache, 2.0 * (out - y[sel]) / out.size)
                self.opt.step(self.predictor.params, grads)
            full, _ = self.predictor.forward(x)
            losses.append(float(((full - y) ** 2).mean()))
        return losses

    def train(self, series: WorkloadSeries, epochs: int) -> list[float]:
        x, y = make_windows(series.values, self.config.lookback)
        return self.fit_windows(x, y, epochs)

    def test_mse(self, series: WorkloadSeries) -> float:
        x, y = make_windows(series.values, self.config.lookback)
        out, _ = self.predictor.forward(x / self.scale)
        return float(((out * self.scale - y) ** 2).mean())
