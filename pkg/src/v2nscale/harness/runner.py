"""Training/evaluation loops, metric aggregation and result files.

Each (agent, seed) run is fully self-contained: it derives its own RNG
substreams from the run seed, owns its environment and agent, and writes
into its own directory, so runs can execute in parallel.
"""

import csv
import logging
import multiprocessing
import time
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .. import rng as rngmod
from ..agents import (A2cAgent, A2cConfig, ConstantPolicy, DdpgAgent, DdpgConfig,
                      LstmScaler, LstmScalerConfig, OraclePolicy, PiConfig,
                      PiController, QLearnConfig, QTableAgent, save_agent)
from ..simenv import EpisodeLog, run_episode
from ..trace import WorkloadSeries, generate_synthetic, load_trace, split, to_workload
from .config import Scenario

log = logging.getLogger(__name__)


@dataclass
class TrainResult:
    agent: object
    curve: list = field(default_factory=list)
    curve_kind: str | None = None       # "mean_reward" or "train_mse"
    wall_clock: float = 0.0


@dataclass
class RunMetrics:
    agent: str
    seed: int
    avg_active_cpus: float
    avg_reward: float
    log: EpisodeLog
    wall_clock: float = 0.0


def build_workload(scenario: Scenario) -> tuple[WorkloadSeries, WorkloadSeries, WorkloadSeries]:
    """Full workload series plus its train/test split."""
    src = scenario.trace
    if src.kind == "synthetic":
        trace = generate_synthetic(src.days, src.seed, src.profile)
    else:
        trace = load_trace(src.path)
    workload = to_workload(trace, scenario.vehicles_per_cpu)
    train_part, test_part = split(workload, scenario.train_fraction)
    return workload, train_part, test_part


def train_episodes_for(kind: str, scenario: Scenario) -> int:
    if kind in ("ddpg", "a2c"):
        return scenario.drl_train_episodes
    if kind == "qlearn":
        return scenario.qlearn_train_episodes
    return 0


def make_agent(kind: str, scenario: Scenario, seed: int, overrides: dict | None = None):
    """Fresh agent with its own named RNG substream."""
    kwargs = dict(overrides or {})
    env = scenario.env_config(seed)
    agent_rng = rngmod.stream(seed, "agent", kind)
    steps = scenario.episode_steps
    if kind == "ddpg":
        config = DdpgConfig(total_train_steps=scenario.drl_train_episodes * steps,
                            **{k: tuple(v) if k == "hidden" else v
                               for k, v in kwargs.items()})
        return DdpgAgent(env, config, agent_rng)
    if kind == "a2c":
        config = A2cConfig(**{k: tuple(v) if k == "hidden" else v
                              for k, v in kwargs.items()})
        return A2cAgent(env, config, agent_rng)
    if kind == "qlearn":
        if scenario.action_limit > 1:
            log.warning("qlearn keeps its {-1,0,1} action set inside the "
                        "+-%d scenario space", scenario.action_limit)
        config = QLearnConfig(total_train_steps=scenario.qlearn_train_episodes * steps,
                              **kwargs)
        return QTableAgent(env, config, agent_rng)
    if kind == "pi":
        return PiController(scenario.action_limit, PiConfig(**kwargs))
    if kind == "lstm":
        return LstmScaler(env, LstmScalerConfig(**kwargs), agent_rng)
    if kind == "oracle":
        return OraclePolicy(env)
    if kind == "constant":
        return ConstantPolicy(**kwargs) if kwargs else ConstantPolicy(0)
    raise ValueError(f"unknown agent kind {kind!r}")


def train(kind: str, scenario: Scenario, seed: int,
          overrides: dict | None = None) -> TrainResult:
    """Train one agent: episodic rollouts for RL agents, supervised
    regression for the predictor, nothing for the static controllers."""
    started = time.perf_counter()
    agent = make_agent(kind, scenario, seed, overrides)
    _, train_part, _ = build_workload(scenario)
    result = TrainResult(agent=agent)

    if kind == "lstm":
        result.curve = agent.train(train_part, scenario.lstm_train_epochs)
        result.curve_kind = "train_mse"
    else:
        episodes = train_episodes_for(kind, scenario)
        if episodes > 0:
            steps = scenario.episode_steps
            n_days = (len(train_part) - 1) // steps
            if n_days < 1:
                raise ValueError(f"train split with {len(train_part)} points is too "
                                 f"short for {steps}-step episodes")
            env = scenario.env_config(seed)
            env_rng = rngmod.stream(seed, "train-env", kind)
            day_rng = rngmod.stream(seed, "episodes", kind)
            agent.train_mode = True
            for _ in range(episodes):
                day = int(day_rng.integers(n_days))
                window = range(day * steps, (day + 1) * steps)
                episode_log = run_episode(agent, train_part, env, window, env_rng)
                result.curve.append(float(episode_log.rewards().mean()))
            result.curve_kind = "mean_reward"
    agent.freeze()
    result.wall_clock = time.perf_counter() - started
    return result


def evaluate(agent, scenario: Scenario, seed: int, window: tuple[int, int] | None = None,
             agent_name: str = "agent") -> RunMetrics:
    """Deterministic frozen rollout over a window of the test split.

    ``window`` is (start, steps) inside the test split; default is the
    first two days.
    """
    _, _, test_part = build_workload(scenario)
    if window is None:
        window = (0, scenario.eval_window_steps)
    start, steps = window
    if start < 0 or start + steps > len(test_part) - 1:
        raise IndexError(f"window {window} outside test split of length {len(test_part)}")
    agent.freeze()
    env = scenario.env_config(seed)
    env_rng = rngmod.stream(seed, "eval-env")
    started = time.perf_counter()
    episode_log = run_episode(agent, test_part, env, range(start, start + steps), env_rng)
    elapsed = time.perf_counter() - started
    return RunMetrics(agent=agent_name, seed=seed,
                      avg_active_cpus=float(episode_log.active_cpus().mean()),
                      avg_reward=float(episode_log.rewards().mean()),
                      log=episode_log, wall_clock=elapsed)


METRICS_CSV_COLUMNS = ("agent", "seed", "steps", "avg_active_cpus", "avg_reward")


def write_metrics_csv(metrics: RunMetrics, path) -> None:
    # wall clock is intentionally omitted: these files must be reproducible
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(METRICS_CSV_COLUMNS)
        writer.writerow([metrics.agent, metrics.seed, len(metrics.log),
                         repr(metrics.avg_active_cpus), repr(metrics.avg_reward)])


def write_learning_curve(result: TrainResult, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        if result.curve_kind == "train_mse":
            writer.writerow(("epoch", "train_mse"))
        else:
            writer.writerow(("episode", "mean_reward"))
        for i, value in enumerate(result.curve):
            writer.writerow([i, repr(float(value))])


def run_one(kind: str, scenario: Scenario, seed: int, outdir,
            overrides: dict | None = None, label: str | None = None,
            window: tuple[int, int] | None = None) -> RunMetrics:
    """Train + evaluate one (agent, seed) and write its result files."""
    label = label or kind
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    result = train(kind, scenario, seed, overrides)
    metrics = evaluate(result.agent, scenario, seed, window=window, agent_name=label)
    metrics.wall_clock += result.wall_clock
    write_metrics_csv(metrics, outdir / "metrics.csv")
    metrics.log.write_csv(outdir / "trace.csv")
    write_learning_curve(result, outdir / "learning_curve.csv")
    save_agent(result.agent, outdir / "checkpoint.json")
    return metrics


def parse_agent_spec(spec: str) -> tuple[str, str]:
    """'kind' or 'label=kind' -> (label, kind)."""
    if "=" in spec:
        label, kind = spec.split("=", 1)
        return label.strip(), kind.strip()
    return spec.strip(), spec.strip()


@dataclass
class SummaryRow:
    agent: str
    mean_avg_cpus: float
    std_avg_cpus: float
    mean_avg_reward: float
    std_avg_reward: float
    n_seeds: int


def _run_one_job(job: tuple) -> RunMetrics:
    kind, scenario, seed, run_dir, overrides, label, window = job
    return run_one(kind, scenario, seed, run_dir, overrides=overrides,
                   label=label, window=window)


def compare(scenario: Scenario, agent_specs, seeds=None, outdir="results",
            overrides: dict | None = None, window: tuple[int, int] | None = None,
            workers: int = 1) -> tuple[list[SummaryRow], dict]:
    """Train/evaluate every agent over every seed; aggregate mean +- std.

    Returns the summary rows and the per-agent metrics lists; writes
    per-run files plus <outdir>/<scenario>/summary.csv. Runs are
    independent, so ``workers > 1`` executes them in parallel processes;
    results are identical either way.
    """
    seeds = tuple(seeds) if seeds is not None else scenario.seeds
    overrides = overrides or {}
    root = Path(outdir) / scenario.name
    labeled = [parse_agent_spec(spec) for spec in agent_specs]
    jobs = [(kind, scenario, seed, root / label / str(seed),
             overrides.get(kind), label, window)
            for label, kind in labeled for seed in seeds]
    if workers > 1 and len(jobs) > 1:
        with multiprocessing.get_context("spawn").Pool(workers) as pool:
            results = pool.map(_run_one_job, jobs)
    else:
        results = [_run_one_job(job) for job in jobs]

    rows: list[SummaryRow] = []
    all_metrics: dict[str, list[RunMetrics]] = {}
    for i, (label, _) in enumerate(labeled):
        per_seed = results[i * len(seeds):(i + 1) * len(seeds)]
        for metrics in per_seed:
            log.info("%s seed=%d: avg_cpus=%.3f avg_reward=%.4f",
                     label, metrics.seed, metrics.avg_active_cpus, metrics.avg_reward)
        cpus = np.array([m.avg_active_cpus for m in per_seed])
        rewards = np.array([m.avg_reward for m in per_seed])
        rows.append(SummaryRow(agent=label,
                               mean_avg_cpus=float(cpus.mean()),
                               std_avg_cpus=float(cpus.std()),
                               mean_avg_reward=float(rewards.mean()),
                               std_avg_reward=float(rewards.std()),
                               n_seeds=len(seeds)))
        all_metrics[label] = per_seed
    root.mkdir(parents=True, exist_ok=True)
    write_summary_csv(rows, root / "summary.csv")
    return rows, all_metrics


SUMMARY_CSV_COLUMNS = ("agent", "mean_avg_cpus", "std_avg_cpus",
                       "mean_avg_reward", "std_avg_reward", "n_seeds")


def write_summary_csv(rows: list[SummaryRow], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_CSV_COLUMNS)
        for row in rows:
            writer.writerow([row.agent, repr(row.mean_avg_cpus), repr(row.std_avg_cpus),
                             repr(row.mean_avg_reward), repr(row.std_avg_reward),
                             row.n_seeds])


def structural_sizes(scenario: Scenario, action_limits=(5, 15, 25)) -> dict:
    """Actor sizes across action limits: the deterministic agent's actor is
    limit-independent while the discrete agent's head grows as 2*limit+1."""
    sizes = {}
    for limit in action_limits:
        sub = replace(scenario, action_limit=limit)
        ddpg = make_agent("ddpg", sub, seed=0)
        a2c = make_agent("a2c", sub, seed=0)
        sizes[limit] = {
            "ddpg_actor_params": ddpg.actor.spec.param_count,
            "a2c_actor_params": a2c.actor.spec.param_count,
            "a2c_output_dim": a2c.actor.spec.output_dim,
        }
    return sizes
