"""Adam optimizer with bias correction, updating parameters in place."""

import numpy as np


class Adam:
    def __init__(self, lr: float = 3e-3, beta1: float = 0.9, beta2: float = 0.999,
                 epsilon: float = 1e-8):
        if lr <= 0:
            raise ValueError("learning rate must be positive")
        if not (0.0 < beta1 < 1.0 and 0.0 < beta2 < 1.0):
            raise ValueError("beta1 and beta2 must lie in (0, 1)")
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.epsilon = epsilon
        self.step_count = 0
        self.m: list[np.ndarray] | None = None
        self.v: list[np.ndarray] | None = None
        self._scratch: list[np.ndarray] | None = None

    def step(self, params: list[np.ndarray], grads: list[np.ndarray]) -> None:
        if len(params) != len(grads):
            raise ValueError("params and grads must have the same length")
        if self.m is None:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
            self._scratch = [np.empty_like(p) for p in params]
        if len(self.m) != len(params):
            raise ValueError("optimizer state does not match parameter list")
        self.step_count += 1
        bc1 = 1.0 - self.beta1 ** self.step_count
        bc2 = 1.0 - self.beta2 ** self.step_count
        for p, g, m, v, buf in zip(params, grads, self.m, self.v, self._scratch):
            if p.shape != g.shape or p.shape != m.shape:
                raise ValueError(f"shape mismatch: param {p.shape}, grad {g.shape}")
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            np.multiply(g, g, out=buf)
            buf *= 1.0 - self.beta2
            v += buf
            np.divide(v, bc2, out=buf)
            np.sqrt(buf, out=buf)
            buf += self.epsilon
            np.divide(m, buf, out=buf)
            buf *= self.lr / bc1
            p -= buf
