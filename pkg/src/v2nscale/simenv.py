"""Vertical-scaling MDP: state, per-CPU load/backlog dynamics, reward.

One simulation slot works as follows. The agent picks an integer action a
from A = {-action_limit, ..., +action_limit}; the environment clamps it so
the active CPU count stays in [1, n_max], re-maps carried backlog onto the
new CPU set, splits the next slot's workload across CPUs with a Dirichlet
draw, and pays out

    reward = min_i load_i - beta * max_i backlog_i

where load_i is clipped at one CPU's capacity and backlog_i is the demand
the CPU could not process. Backlog is computed from the *unclipped* demand,
so unprocessed work is carried instead of vanishing.

An environment rollout mutates nothing shared: all functions here are pure
given their RNG, and concurrent rollouts just need distinct Generators.
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from . import rng as rngmod
from .trace import WorkloadSeries


@dataclass(frozen=True)
class EnvConfig:
    n_max: int = 30
    beta: float = 1.0
    gamma: float = 0.99            # consumed by learning agents, not by step()
    dirichlet_alpha: float = 1000.0
    action_limit: int = 5
    initial_cpus: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not 1 <= self.action_limit <= self.n_max:
            raise ValueError("action_limit must lie in [1, n_max]")
        if not 1 <= self.initial_cpus <= self.n_max:
            raise ValueError("initial_cpus must lie in [1, n_max]")
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if self.dirichlet_alpha <= 0:
            raise ValueError("dirichlet_alpha must be positive")

    @property
    def action_space(self) -> np.ndarray:
        return np.arange(-self.action_limit, self.action_limit + 1)


@dataclass
class EnvState:
    n_active: int
    workload: float
    backlogs: np.ndarray

    def __post_init__(self):
        self.backlogs = np.asarray(self.backlogs, dtype=np.float64)
        if self.n_active < 1:
            raise ValueError("n_active must be >= 1")
        if len(self.backlogs) != self.n_active:
            raise ValueError("backlog vector length must equal n_active")
        if np.any(self.backlogs < 0):
            raise ValueError("backlogs must be non-negative")
        if self.workload < 0:
            raise ValueError("workload must be non-negative")


@dataclass
class StepOutcome:
    next_state: EnvState
    cpu_loads: np.ndarray          # per-CPU load in [0, 1]
    reward: float
    reward_min_load: float         # min_i cpu_loads
    reward_max_backlog: float      # max_i backlog, before the -beta weighting
    effective_action: int          # action after clamping
    shares: np.ndarray             # Dirichlet split of the slot's workload


@dataclass(frozen=True)
class Observation:
    """What a policy sees before choosing an action.

    ``max_load`` is the previous slot's maximum per-CPU load (0 at episode
    start). ``next_workload`` is only populated for clairvoyant test
    policies; learning agents must ignore it.
    """

    n_active: int
    workload: float
    max_load: float = 0.0
    next_workload: float | None = None


@dataclass(frozen=True)
class Transition:
    """One step as seen by a learning policy.

    ``action`` is what the policy chose, ``effective_action`` what the
    environment applied after clamping; discrete learners should update on
    the effective action. ``done`` marks the end of a (time-limited)
    episode window, not a terminal MDP state.
    """

    obs: Observation
    action: int
    effective_action: int
    reward: float
    next_obs: Observation
    done: bool


def reset(config: EnvConfig, series: WorkloadSeries, start_index: int) -> EnvState:
    if not 0 <= start_index < len(series):
        raise IndexError(f"start_index {start_index} outside series of length {len(series)}")
    return EnvState(n_active=config.initial_cpus,
                    workload=series[start_index],
                    backlogs=np.zeros(config.initial_cpus))


def clamp_action(state: EnvState, action: int, config: EnvConfig) -> int:
    """Nearest action to ``action`` that keeps n_active within [1, n_max]."""
    if abs(action) > config.action_limit:
        raise ValueError(f"action {action} outside "
                         f"[-{config.action_limit}, {config.action_limit}]")
    low = 1 - state.n_active
    high = config.n_max - state.n_active
    return int(min(max(action, low), high))


def sample_shares(n: int, alpha: float, rng: np.random.Generator) -> np.ndarray:
    """Dirichlet(alpha, ..., alpha) sample as normalized Gamma(alpha, 1) draws."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if n == 1:
        return np.ones(1)
    draws = rng.gamma(alpha, 1.0, size=n)
    total = draws.sum()
    if not np.isfinite(total) or total <= 0.0:
        return np.full(n, 1.0 / n)
    return draws / total


def remap_backlogs(backlogs: np.ndarray, n_new: int) -> np.ndarray:
    """Carry backlog onto a resized CPU set without losing work.

    Scale-up appends idle CPUs; scale-down pools the removed CPUs' backlog
    and spreads it uniformly over the survivors.
    """
    n_old = len(backlogs)
    if n_new == n_old:
        return backlogs.copy()
    if n_new > n_old:
        return np.concatenate([backlogs, np.zeros(n_new - n_old)])
    pooled = backlogs[n_new:].sum()
    return backlogs[:n_new] + pooled / n_new


def step(state: EnvState, action: int, next_workload: float, config: EnvConfig,
         rng: np.random.Generator, shares: np.ndarray | None = None) -> StepOutcome:
    """Apply one scaling action and advance the workload by one slot.

    ``shares`` overrides the Dirichlet draw (test hook); it must sum to 1.
    """
    if next_workload < 0:
        raise ValueError("next_workload must be non-negative")
    effective = clamp_action(state, action, config)
    n_new = state.n_active + effective
    carried = remap_backlogs(state.backlogs, n_new)
    if shares is None:
        shares = sample_shares(n_new, config.dirichlet_alpha, rng)
    else:
        shares = np.asarray(shares, dtype=np.float64)
        if len(shares) != n_new:
            raise ValueError(f"shares length {len(shares)} != active CPUs {n_new}")
    demand = shares * next_workload + carried
    backlogs = np.maximum(0.0, demand - 1.0)
    loads = demand - backlogs  # == min(1, demand), and demand splits exactly
    min_load = float(loads.min())
    max_backlog = float(backlogs.max())
    reward = min_load - config.beta * max_backlog
    next_state = EnvState(n_active=n_new, workload=float(next_workload), backlogs=backlogs)
    return StepOutcome(next_state=next_state, cpu_loads=loads, reward=reward,
                       reward_min_load=min_load, reward_max_backlog=max_backlog,
                       effective_action=effective, shares=shares)


@dataclass
class EpisodeStep:
    t: int
    state: EnvState               # state before the action
    action: int                   # action the policy chose
    outcome: StepOutcome


EPISODE_CSV_COLUMNS = ("t", "N", "W", "action", "effective_action",
                       "min_load", "max_load", "max_backlog", "reward")


@dataclass
class EpisodeLog:
    steps: list[EpisodeStep] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def rewards(self) -> np.ndarray:
        return np.array([s.outcome.reward for s in self.steps])

    def active_cpus(self) -> np.ndarray:
        """CPUs active during each slot (after the action was applied)."""
        return np.array([s.outcome.next_state.n_active for s in self.steps])

    def max_loads(self) -> np.ndarray:
        return np.array([s.outcome.cpu_loads.max() for s in self.steps])

    def rows(self):
        for s in self.steps:
            yield (s.t, s.outcome.next_state.n_active, s.outcome.next_state.workload,
                   s.action, s.outcome.effective_action,
                   s.outcome.reward_min_load, float(s.outcome.cpu_loads.max()),
                   s.outcome.reward_max_backlog, s.outcome.reward)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(EPISODE_CSV_COLUMNS)
            for row in self.rows():
                writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def run_episode(policy, series: WorkloadSeries, config: EnvConfig, window: range,
                rng: np.random.Generator | None = None) -> EpisodeLog:
    """Roll the policy over ``window``; step t consumes series[t + 1].

    Learning policies (train_mode on) receive a Transition after every step.
    The log is deterministic given the policy state and the RNG.
    """
    log = EpisodeLog()
    if len(window) == 0:
        return log
    if window.step != 1:
        raise ValueError("episode window must have step 1")
    if window.start < 0 or window.stop > len(series) - 1:
        raise IndexError(f"window {window} outside series of length {len(series)} "
                         "(last index is reserved for the lookahead workload)")
    if rng is None:
        rng = rngmod.stream(config.seed, "env")

    state = reset(config, series, window.start)
    policy.begin_episode()
    prev_max_load = 0.0
    last = window.stop - 1
    for t in window:
        obs = Observation(n_active=state.n_active, workload=state.workload,
                          max_load=prev_max_load, next_workload=series[t + 1])
        action = int(policy.act(obs))
        outcome = step(state, action, series[t + 1], config, rng)
        if getattr(policy, "train_mode", False):
            next_obs = Observation(n_active=outcome.next_state.n_active,
                                   workload=outcome.next_state.workload,
                                   max_load=float(outcome.cpu_loads.max()))
            policy.observe(Transition(obs=obs, action=action,
                                      effective_action=outcome.effective_action,
                                      reward=outcome.reward, next_obs=next_obs,
                                      done=(t == last)))
        log.steps.append(EpisodeStep(t=t, state=state, action=action, outcome=outcome))
        prev_max_load = float(outcome.cpu_loads.max())
        state = outcome.next_state
    return log
