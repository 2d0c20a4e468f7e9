"""Deterministic ordered discretization of a real-valued action.

A raw action in [lower, upper] is mapped affinely onto [-n_max, n_max] and
then snapped to the nearest integer action; exact half-way points resolve
toward the lower action. One output neuron therefore drives an action
space of any size, and the transform preserves the ordering of the raw
actions.
"""

import logging
import math
from dataclasses import dataclass

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DodConfig:
    n_max: int                  # action-space half-width
    lower: float = -1.0
    upper: float = 1.0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not self.lower < self.upper:
            raise ValueError("lower bound must be below upper bound")


def affine_value(raw: float, config: DodConfig) -> float:
    """Map raw in [lower, upper] onto the continuous action axis."""
    span = config.upper - config.lower
    return (raw * 2.0 * config.n_max / span
            - config.n_max * (config.upper + config.lower) / span)


def dod(raw: float, config: DodConfig) -> int:
    if raw < config.lower or raw > config.upper:
        log.warning("raw action %.6g outside [%g, %g]; clamping",
                    raw, config.lower, config.upper)
        raw = min(max(raw, config.lower), config.upper)
    z = affine_value(raw, config)
    # nearest integer, half-way ties toward the lower action
    a = math.ceil(z - 0.5)
    return int(min(max(a, -config.n_max), config.n_max))
