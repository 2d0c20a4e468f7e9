"""Figures: per-agent time series (max load, CPUs, reward) and summary bars."""

import logging
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

from ..simenv import EpisodeLog

log = logging.getLogger(__name__)


def timeseries_figure(episode_log: EpisodeLog, title: str):
    """Three stacked panels: maximum CPU load, active CPUs, reward."""
    fig, axes = plt.subplots(3, 1, figsize=(9, 7), sharex=True)
    t = [s.t for s in episode_log.steps]
    axes[0].plot(t, episode_log.max_loads(), color="tab:red", lw=0.9)
    axes[0].set_ylabel("max CPU load")
    axes[0].axhline(1.0, color="gray", ls=":", lw=0.8)
    axes[1].plot(t, episode_log.active_cpus(), color="tab:blue", lw=0.9)
    axes[1].set_ylabel("active CPUs")
    axes[2].plot(t, episode_log.rewards(), color="tab:green", lw=0.9)
    axes[2].set_ylabel("reward")
    axes[2].set_xlabel("slot")
    fig.suptitle(title)
    fig.tight_layout()
    return fig


def bars_figure(summary_rows):
    """Mean avg CPUs and mean avg reward per agent, with std error bars."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 4))
    labels = [r.agent for r in summary_rows]
    x = range(len(labels))
    axes[0].bar(x, [r.mean_avg_cpus for r in summary_rows],
                yerr=[r.std_avg_cpus for r in summary_rows], color="tab:blue",
                capsize=3)
    axes[0].set_ylabel("avg active CPUs")
    axes[1].bar(x, [r.mean_avg_reward for r in summary_rows],
                yerr=[r.std_avg_reward for r in summary_rows], color="tab:green",
                capsize=3)
    axes[1].set_ylabel("avg reward")
    for ax in axes:
        ax.set_xticks(list(x))
        ax.set_xticklabels(labels, rotation=30, ha="right")
    fig.tight_layout()
    return fig


def emit_plots(logs_by_agent: dict, summary_rows, outdir) -> list[Path]:
    """Write SVG figures; returns the created paths ([] for empty input)."""
    if not logs_by_agent:
        log.info("no agent results; nothing to plot")
        return []
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    paths = []
    for label, episode_log in logs_by_agent.items():
        fig = timeseries_figure(episode_log, label)
        path = outdir / f"trace_{label}.svg"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    if summary_rows:
        fig = bars_figure(summary_rows)
        path = outdir / "summary_bars.svg"
        fig.savefig(path)
        plt.close(fig)
        paths.append(path)
    return paths
