"""Advantage actor-critic over the discrete action set.

Unlike the deterministic scaler, the actor's output layer has one neuron
per action, so its size grows linearly with the action limit.
"""

from dataclasses import dataclass

import numpy as np

from ..neural import Adam, Mlp, MlpSpec
from ..simenv import EnvConfig, Observation, Transition
from .base import Policy, obs_vector

_PROB_EPS = 1e-12


@dataclass(frozen=True)
class A2cConfig:
    hidden: tuple = (128, 128, 128)
    lr: float = 3e-3
    entropy_weight: float = 0.01
    actor_final_scale: float = 1e-3  # near-uniform initial policy


def policy_entropy(probs: np.ndarray) -> float:
    p = np.maximum(probs, _PROB_EPS)
    return float(-(p * np.log(p)).sum(axis=-1).mean())


class A2cAgent(Policy):
    def __init__(self, env: EnvConfig, config: A2cConfig = A2cConfig(),
                 rng: np.random.Generator | None = None):
        if rng is None:
            rng = np.random.default_rng(env.seed)
        self.env_config = env
        self.config = config
        self.n_max = env.n_max
        self.gamma = env.gamma
        self.action_limit = env.action_limit
        self.n_actions = 2 * env.action_limit + 1
        self.rng = rng
        self.actor = Mlp(MlpSpec(2, self.n_actions, config.hidden,
                                 output_activation="softmax"),
                         rng, final_layer_scale=config.actor_final_scale)
        self.critic = Mlp(MlpSpec(2, 1, config.hidden), rng)
        self.actor_opt = Adam(lr=config.lr)
        self.critic_opt = Adam(lr=config.lr)
        self._actor_gbuf = np.empty(self.actor.spec.param_count)
        self._critic_gbuf = np.empty(self.critic.spec.param_count)
        self.train_mode = True

    def action_probs(self, obs: Observation) -> np.ndarray:
        vec = obs_vector(obs, self.n_max)[None, :]
        return self.actor.forward(vec)[0][0]

    def act(self, obs: Observation) -> int:
        probs = self.action_probs(obs)
        if self.train_mode:
            idx = int(self.rng.choice(self.n_actions, p=probs))
        else:
            idx = int(np.argmax(probs))
        return idx - self.action_limit

    def observe(self, transition: Transition) -> None:
        self.update([transition])

    def update(self, segment: list[Transition]) -> dict:
        """1-step TD advantage update over a trajectory segment."""
        if not segment:
            raise ValueError("segment must be non-empty")
        n = len(segment)
        s = np.stack([obs_vector(t.obs, self.n_max) for t in segment])
        s2 = np.stack([obs_vector(t.next_obs, self.n_max) for t in segment])
        r = np.array([t.reward for t in segment])[:, None]
        # discrete learners update on the action the environment applied
        idx = np.array([t.effective_action + self.action_limit for t in segment])

        v2, _ = self.critic.forward(s2)
        target = r + self.gamma * v2
        v, cache_v = self.critic.forward(s)
        advantage = (target - v).ravel()
        critic_loss = float(((v - target) ** 2).mean())
        grads_v, _ = self.critic.backward(cache_v, 2.0 * (v - target) / n)
        self.critic_opt.step([self.critic.param_vector],
                             [self.critic.flatten_grads(grads_v, out=self._critic_gbuf)])

        probs, cache_p = self.actor.forward(s)
        safe = np.maximum(probs, _PROB_EPS)
        rows = np.arange(n)
        pg_loss = float(-(advantage * np.log(safe[rows, idx])).mean())
        entropy = policy_entropy(probs)
        grad_p = np.zeros_like(probs)
        grad_p[rows, idx] -= advantage / (safe[rows, idx] * n)
        if self.config.entropy_weight != 0.0:
            grad_p += self.config.entropy_weight * (np.log(safe) + 1.0) / n
        grads_p, _ = self.actor.backward(cache_p, grad_p)
        self.actor_opt.step([self.actor.param_vector],
                            [self.actor.flatten_grads(grads_p, out=self._actor_gbuf)])
        return {"critic_loss": critic_loss, "pg_loss": pg_loss, "entropy": entropy}
