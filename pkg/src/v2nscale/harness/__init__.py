"""Experiment orchestration: scenarios, runs, metrics, plots."""

from .config import (HarnessConfig, Scenario, TraceSource, load_config,
                     results_root, scenario_from_dict, with_action_limit)
from .runner import (RunMetrics, SummaryRow, TrainResult, build_workload, compare,
                     evaluate, make_agent, parse_agent_spec, run_one,
                     structural_sizes, train, write_metrics_csv, write_summary_csv)
from .plots import bars_figure, emit_plots, timeseries_figure

__all__ = [
    "HarnessConfig", "RunMetrics", "Scenario", "SummaryRow", "TraceSource",
    "TrainResult", "bars_figure", "build_workload", "compare", "emit_plots",
    "evaluate", "load_config", "make_agent", "parse_agent_spec", "results_root",
    "run_one", "scenario_from_dict", "structural_sizes", "timeseries_figure",
    "train", "with_action_limit", "write_metrics_csv", "write_summary_csv",
]
