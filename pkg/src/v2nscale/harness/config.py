"""Scenario definitions and the declarative experiment config file."""

import os
from dataclasses import dataclass, field, replace

import yaml

from ..simenv import EnvConfig
from ..trace import SyntheticProfile

RESULTS_ENV_VAR = "V2NSCALE_RESULTS"
KNOWN_AGENTS = ("ddpg", "a2c", "qlearn", "pi", "lstm", "oracle", "constant")


@dataclass(frozen=True)
class TraceSource:
    kind: str = "synthetic"            # "synthetic" or "file"
    path: str | None = None
    days: int = 30
    seed: int = 7
    profile: SyntheticProfile = field(default_factory=SyntheticProfile)

    def __post_init__(self):
        if self.kind not in ("synthetic", "file"):
            raise ValueError(f"unknown trace source kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise ValueError("file trace source needs a path")


@dataclass(frozen=True)
class Scenario:
    name: str = "performance"
    action_limit: int = 5
    n_max: int = 30
    beta: float = 1.0
    gamma: float = 0.99
    dirichlet_alpha: float = 1000.0
    initial_cpus: int = 1
    vehicles_per_cpu: float = 8.0
    trace: TraceSource = field(default_factory=TraceSource)
    train_fraction: float = 0.8
    episode_steps: int = 288           # one simulated day
    eval_window_steps: int = 576       # two days
    drl_train_episodes: int = 200
    qlearn_train_episodes: int = 2000
    lstm_train_epochs: int = 50
    seeds: tuple = (0, 1, 2, 3, 4)

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("seeds must be non-empty")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))

    def env_config(self, seed: int) -> EnvConfig:
        return EnvConfig(n_max=self.n_max, beta=self.beta, gamma=self.gamma,
                         dirichlet_alpha=self.dirichlet_alpha,
                         action_limit=self.action_limit,
                         initial_cpus=self.initial_cpus, seed=seed)


@dataclass(frozen=True)
class HarnessConfig:
    scenario: Scenario = field(default_factory=Scenario)
    agents: tuple = ("ddpg", "a2c", "qlearn", "pi", "lstm")
    overrides: dict = field(default_factory=dict)   # agent kind -> config kwargs


def _trace_source_from_dict(data: dict) -> TraceSource:
    data = dict(data)
    profile = data.pop("profile", None)
    if profile is not None:
        data["profile"] = SyntheticProfile(**profile)
    return TraceSource(**data)


def scenario_from_dict(data: dict) -> Scenario:
    data = dict(data)
    trace = data.pop("trace", None)
    if trace is not None:
        data["trace"] = _trace_source_from_dict(trace)
    seeds = data.pop("seeds", None)
    if seeds is not None:
        data["seeds"] = tuple(seeds)
    return Scenario(**data)


def load_config(path) -> HarnessConfig:
    """Read the YAML experiment document: scenario, agents, overrides."""
    with open(path, encoding="utf-8") as fh:
        doc = yaml.safe_load(fh) or {}
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: config root must be a mapping")
    scenario = scenario_from_dict(doc.get("scenario", {}))
    agents = tuple(doc.get("agents", ("ddpg", "a2c", "qlearn", "pi", "lstm")))
    overrides = doc.get("overrides", {}) or {}
    for kind in overrides:
        if kind not in KNOWN_AGENTS:
            raise ValueError(f"override for unknown agent {kind!r}")
    return HarnessConfig(scenario=scenario, agents=agents, overrides=dict(overrides))


def with_action_limit(scenario: Scenario, action_limit: int) -> Scenario:
    return replace(scenario, action_limit=action_limit)


def results_root(cli_value=None) -> str:
    """CLI flag beats the environment variable beats ./results."""
    if cli_value:
        return str(cli_value)
    return os.environ.get(RESULTS_ENV_VAR, "results")
