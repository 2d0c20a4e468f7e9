import logging

import numpy as np
import pytest

from v2nscale.agents import DodConfig, affine_value, dod


def brute_force(raw, config):
    """Independent oracle: scan the whole action set for the nearest value."""
    actions = np.arange(-config.n_max, config.n_max + 1)
    z = affine_value(min(max(raw, config.lower), config.upper), config)
    return int(actions[np.argmin(np.abs(actions - z))])  # first hit = lower tie


def test_endpoints_and_midpoint_exact():
    for n_max in (1, 5, 15, 25):
        config = DodConfig(n_max=n_max)
        assert dod(-1.0, config) == -n_max
        assert dod(1.0, config) == n_max
        assert dod(0.0, config) == 0


def test_half_integer_ties_resolve_down():
    config = DodConfig(n_max=5)
    assert affine_value(0.5, config) == pytest.approx(2.5)
    assert dod(0.5, config) == 2
    assert dod(-0.5, config) == -3


def test_interior_value_rounds_to_nearest():
    config = DodConfig(n_max=5)
    assert affine_value(0.31, config) == pytest.approx(1.55)
    assert dod(0.31, config) == 2
    assert dod(0.29, config) == 1


def test_matches_brute_force_scan():
    rng = np.random.default_rng(0)
    for n_max in (5, 15, 25):
        config = DodConfig(n_max=n_max)
        for raw in rng.uniform(-1, 1, 2000):
            assert dod(float(raw), config) == brute_force(float(raw), config)


def test_monotone_in_raw_action():
    rng = np.random.default_rng(1)
    config = DodConfig(n_max=15)
    for _ in range(2000):
        a, b = sorted(rng.uniform(-1, 1, 2))
        assert dod(float(a), config) <= dod(float(b), config)


def test_every_action_has_a_preimage_interval():
    config = DodConfig(n_max=25)
    width = (config.upper - config.lower) / (2 * config.n_max)
    for a in range(-25, 26):
        center = a / 25.0
        for raw in (center, center - 0.4 * width, center + 0.4 * width):
            raw = min(max(raw, -1.0), 1.0)
            assert dod(raw, config) == a


def test_scale_invariance_under_affine_reparameterization():
    base = DodConfig(n_max=15)
    rng = np.random.default_rng(2)
    for _ in range(50):
        lo = float(rng.uniform(-9, 2))
        hi = lo + float(rng.uniform(0.5, 10))
        moved = DodConfig(n_max=15, lower=lo, upper=hi)
        for raw in rng.uniform(-1, 1, 40):
            remapped = lo + (raw + 1.0) / 2.0 * (hi - lo)
            assert dod(float(remapped), moved) == dod(float(raw), base)


def test_out_of_range_raw_clamps_and_logs(caplog):
    config = DodConfig(n_max=5)
    with caplog.at_level(logging.WARNING, logger="v2nscale.agents.dod"):
        assert dod(1.7, config) == 5
        assert dod(-3.0, config) == -5
    assert len(caplog.records) == 2


def test_config_validation():
    with pytest.raises(ValueError):
        DodConfig(n_max=0)
    with pytest.raises(ValueError):
        DodConfig(n_max=3, lower=1.0, upper=-1.0)
