"""Trace-driven vertical CPU autoscaling testbed for V2N edge services.

Subpackages: ``trace`` (workload ingestion/generation), ``simenv`` (the
scaling MDP), ``neural`` (MLP/LSTM kernel), ``agents`` (scaling policies),
``harness`` (experiments, metrics, plots).
"""

__version__ = "0.1.0"
