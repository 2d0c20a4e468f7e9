"""Command-line entry point: trace generation, training, evaluation,
comparison and the gradient-check suite."""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import rng as rngmod
from .agents import load_agent
from .harness import (HarnessConfig, compare, emit_plots, evaluate, load_config,
                      results_root, run_one, with_action_limit)
from .neural import Lstm, LstmSpec, Mlp, MlpSpec, gradient_check
from .trace import SyntheticProfile, generate_synthetic, write_trace

log = logging.getLogger(__name__)


def _load_harness_config(path) -> HarnessConfig:
    if path is None:
        return HarnessConfig()
    return load_config(path)


def _parse_window(text: str) -> tuple[int, int]:
    try:
        start_s, end_s = text.split(":")
        start, end = int(start_s), int(end_s)
    except ValueError as exc:
        raise ValueError(f"window must look like START:END, got {text!r}") from exc
    if end <= start:
        raise ValueError(f"window end must be after start, got {text!r}")
    return start, end - start


def cmd_gen_trace(args) -> int:
    profile = SyntheticProfile()
    if args.config:
        profile = _load_harness_config(args.config).scenario.trace.profile
    series = generate_synthetic(args.days, args.seed, profile)
    write_trace(series, args.out)
    print(f"wrote {len(series)} points to {args.out}")
    return 0


def cmd_train(args) -> int:
    cfg = _load_harness_config(args.config)
    scenario = cfg.scenario
    if args.action_limit is not None:
        scenario = with_action_limit(scenario, args.action_limit)
    outdir = Path(results_root(args.results_dir)) / scenario.name / args.agent / str(args.seed)
    metrics = run_one(args.agent, scenario, args.seed, outdir,
                      overrides=cfg.overrides.get(args.agent))
    print(f"{args.agent} seed={args.seed}: avg_cpus={metrics.avg_active_cpus:.3f} "
          f"avg_reward={metrics.avg_reward:.4f} -> {outdir}")
    return 0


def cmd_evaluate(args) -> int:
    cfg = _load_harness_config(args.config)
    agent = load_agent(args.checkpoint)
    window = _parse_window(args.window) if args.window else None
    metrics = evaluate(agent, cfg.scenario, args.seed, window=window,
                       agent_name=Path(args.checkpoint).stem)
    print(f"avg_cpus={metrics.avg_active_cpus:.3f} avg_reward={metrics.avg_reward:.4f} "
          f"steps={len(metrics.log)}")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        from .harness import write_metrics_csv
        write_metrics_csv(metrics, outdir / "metrics.csv")
        metrics.log.write_csv(outdir / "trace.csv")
        print(f"wrote {outdir}/metrics.csv and {outdir}/trace.csv")
    return 0


def cmd_compare(args) -> int:
    cfg = _load_harness_config(args.config)
    scenario = cfg.scenario
    if args.action_limit is not None:
        scenario = with_action_limit(scenario, args.action_limit)
    agents = args.agents.split(",") if args.agents else list(cfg.agents)
    seeds = ([int(s) for s in args.seeds.split(",")] if args.seeds
             else list(scenario.seeds))
    outdir = results_root(args.results_dir)
    rows, all_metrics = compare(scenario, agents, seeds, outdir=outdir,
                                overrides=cfg.overrides)
    logs = {label: metrics[0].log for label, metrics in all_metrics.items()}
    plot_paths = emit_plots(logs, rows, Path(outdir) / scenario.name / "plots")
    print(f"{'agent':>10} {'avg_cpus':>12} {'avg_reward':>14}")
    for row in rows:
        print(f"{row.agent:>10} {row.mean_avg_cpus:8.3f}+-{row.std_avg_cpus:.3f} "
              f"{row.mean_avg_reward:8.4f}+-{row.std_avg_reward:.4f}")
    print(f"summary: {Path(outdir) / scenario.name / 'summary.csv'}; "
          f"{len(plot_paths)} plots")
    return 0


def cmd_gradcheck(args) -> int:
    rng = rngmod.stream(args.seed, "gradcheck")
    worst = 0.0
    for head in ("identity", "tanh", "softmax"):
        out_dim = 5 if head == "softmax" else 1
        net = Mlp(MlpSpec(2, out_dim, (128, 128, 128), output_activation=head), rng)
        x = rng.normal(size=(4, 2))
        target = rng.normal(size=(4, out_dim))
        err = gradient_check(net, x, target)
        worst = max(worst, err)
        print(f"mlp 3x128 {head:>8}: max relative error {err:.3e}")
    lstm = Lstm(LstmSpec(1, 2, 4, 1), rng)
    err = gradient_check(lstm, rng.normal(size=(3, 3, 1)), rng.normal(size=(3, 1)))
    worst = max(worst, err)
    print(f"lstm 2x4          : max relative error {err:.3e}")
    if worst >= 1e-4:
        print(f"FAIL: worst error {worst:.3e} >= 1e-4", file=sys.stderr)
        return 1
    print(f"OK: worst error {worst:.3e} < 1e-4")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="v2nscale",
                                     description="Vertical CPU autoscaling testbed")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-trace", help="generate a synthetic vehicle trace CSV")
    p.add_argument("--days", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config", default=None, help="take the profile from this config")
    p.set_defaults(func=cmd_gen_trace)

    p = sub.add_parser("train", help="train one agent and evaluate it")
    p.add_argument("--config", default=None)
    p.add_argument("--agent", required=True,
                   choices=["ddpg", "a2c", "qlearn", "pi", "lstm", "oracle", "constant"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--action-limit", type=int, choices=[5, 15, 25], default=None)
    p.add_argument("--results-dir", default=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="evaluate a saved checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--window", default=None, help="START:END inside the test split")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("compare", help="train/evaluate several agents over seeds")
    p.add_argument("--config", default=None)
    p.add_argument("--agents", default=None, help="comma-separated agent kinds")
    p.add_argument("--seeds", default=None, help="comma-separated seeds")
    p.add_argument("--action-limit", type=int, choices=[5, 15, 25], default=None)
    p.add_argument("--results-dir", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gradcheck", help="run the finite-difference gradient suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gradcheck)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ValueError, OSError, IndexError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
