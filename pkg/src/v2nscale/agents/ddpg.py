"""Deterministic-policy-gradient scaler with ordered discretization.

The actor emits one real number regardless of the action-space size; the
discretization (see ``dod``) lives on the environment side of the gradient,
so the critic and the policy update only ever see the raw action.
"""

from dataclasses import dataclass, field

import numpy as np

from ..neural import Adam, Mlp, MlpSpec
from ..simenv import EnvConfig, Observation, Transition
from .base import Policy, obs_vector
from .dod import DodConfig, dod
from .noise import OUNoise
from .replay import ReplayBuffer


@dataclass(frozen=True)
class DdpgConfig:
    hidden: tuple = (128, 128, 128)
    lr: float = 3e-3
    batch_size: int = 64
    buffer_capacity: int = 100_000
    tau: float = 0.005
    warmup_steps: int = 1000
    ou_theta: float = 0.15
    ou_sigma: float = 0.2
    ou_sigma_final: float = 0.02
    total_train_steps: int = 200 * 288  # horizon for the linear sigma decay
    actor_final_scale: float = 1e-3
    # backlog makes the reward unbounded below; a robust critic loss keeps
    # those outliers from swamping the value structure near the optimum
    huber_delta: float = 1.0


def soft_update(target: Mlp, online: Mlp, tau: float) -> None:
    """target <- tau * online + (1 - tau) * target, in place."""
    if target.spec != online.spec:
        raise ValueError("target and online networks differ in shape")
    target.param_vector *= 1.0 - tau
    target.param_vector += tau * online.param_vector


class DdpgAgent(Policy):
    def __init__(self, env: EnvConfig, config: DdpgConfig = DdpgConfig(),
                 rng: np.random.Generator | None = None):
        if rng is None:
            rng = np.random.default_rng(env.seed)
        self.env_config = env
        self.config = config
        self.n_max = env.n_max
        self.gamma = env.gamma
        self.dod_config = DodConfig(n_max=env.action_limit)
        self.rng = rng

        self.actor = Mlp(MlpSpec(2, 1, config.hidden, output_activation="tanh"),
                         rng, final_layer_scale=config.actor_final_scale)
        self.critic = Mlp(MlpSpec(3, 1, config.hidden), rng)
        self.actor_target = self.actor.copy()
        self.critic_target = self.critic.copy()
        self.actor_opt = Adam(lr=config.lr)
        self.critic_opt = Adam(lr=config.lr)
        self._actor_gbuf = np.empty(self.actor.spec.param_count)
        self._critic_gbuf = np.empty(self.critic.spec.param_count)
        self.replay = ReplayBuffer(config.buffer_capacity)
        self.noise = OUNoise(rng, theta=config.ou_theta, sigma=config.ou_sigma)
        self.step_count = 0
        self.train_mode = True
        self._last_raw = 0.0

    def begin_episode(self) -> None:
        self.noise.reset()

    def _sigma(self) -> float:
        c = self.config
        if self.config.total_train_steps <= 0:
            return c.ou_sigma_final
        frac = min(1.0, self.step_count / c.total_train_steps)
        return c.ou_sigma + (c.ou_sigma_final - c.ou_sigma) * frac

    def act_raw(self, obs: Observation, explore: bool) -> tuple[float, int]:
        """Raw actor output (plus exploration noise) and its discrete action."""
        low, high = self.dod_config.lower, self.dod_config.upper
        if explore and self.step_count < self.config.warmup_steps:
            raw = float(self.rng.uniform(low, high))
        else:
            vec = obs_vector(obs, self.n_max)[None, :]
            raw = float(self.actor.forward(vec)[0][0, 0])
            if explore:
                self.noise.sigma = self._sigma()
                raw += self.noise.sample()
        raw = float(min(max(raw, low), high))
        return raw, dod(raw, self.dod_config)

    def act(self, obs: Observation) -> int:
        raw, action = self.act_raw(obs, explore=self.train_mode)
        self._last_raw = raw
        return action

    def observe(self, transition: Transition) -> None:
        self.replay.push(obs_vector(transition.obs, self.n_max),
                         self._last_raw,
                         transition.effective_action,
                         transition.reward,
                         obs_vector(transition.next_obs, self.n_max),
                         transition.done)
        self.step_count += 1
        if (self.step_count >= self.config.warmup_steps
                and len(self.replay) >= self.config.batch_size):
            self.update()

    def update(self, batch: dict | None = None) -> dict:
        """One critic regression + one policy-gradient step + soft target sync."""
        if batch is None:
            if len(self.replay) < self.config.batch_size:
                return {"skipped": True}
            batch = self.replay.sample(self.config.batch_size, self.rng)
        s = batch["obs"]
        raw = batch["raw_actions"][:, None]
        r = batch["rewards"][:, None]
        s2 = batch["next_obs"]
        n = len(s)

        # critic: regress Q(s, raw) onto r + gamma * Q'(s2, pi'(s2));
        # episode ends are time limits, so the bootstrap is never cut
        a2, _ = self.actor_target.forward(s2)
        q2, _ = self.critic_target.forward(np.concatenate([s2, a2], axis=1))
        target = r + self.gamma * q2
        q, cache_q = self.critic.forward(np.concatenate([s, raw], axis=1))
        critic_loss = float(((q - target) ** 2).mean())
        grads, _ = self.critic.backward(cache_q, 2.0 * (q - target) / n)
        self.critic_opt.step([self.critic.param_vector],
                             [self.critic.flatten_grads(grads, out=self._critic_gbuf)])

        # actor: ascend Q(s, pi(s)) through the critic's input gradient
        a_pi, cache_a = self.actor.forward(s)
        q_pi, cache_qa = self.critic.forward(np.concatenate([s, a_pi], axis=1))
        actor_objective = float(q_pi.mean())
        input_grad = self.critic.input_gradient(cache_qa, np.full_like(q_pi, -1.0 / n))
        actor_grads, _ = self.actor.backward(cache_a, input_grad[:, 2:3])
        self.actor_opt.step([self.actor.param_vector],
                            [self.actor.flatten_grads(actor_grads, out=self._actor_gbuf)])

        soft_update(self.actor_target, self.actor, self.config.tau)
        soft_update(self.critic_target, self.critic, self.config.tau)
        return {"critic_loss": critic_loss, "actor_objective": actor_objective,
                "target_mean": float(target.mean())}
