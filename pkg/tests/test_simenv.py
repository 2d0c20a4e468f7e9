import numpy as np
import pytest

from v2nscale.agents import ConstantPolicy
from v2nscale.simenv import (EnvConfig, EnvState, clamp_action, remap_backlogs,
                             reset, run_episode, sample_shares, step)
from v2nscale.trace import WorkloadSeries


def flat_series(value, n=400):
    return WorkloadSeries(np.full(n, float(value)))


def test_reset_defaults():
    config = EnvConfig()
    state = reset(config, flat_series(1.0), 0)
    assert state.n_active == 1
    assert state.workload == 1.0
    np.testing.assert_array_equal(state.backlogs, [0.0])


def test_reset_initial_cpus():
    config = EnvConfig(initial_cpus=5)
    state = reset(config, flat_series(0.3), 2)
    assert state.n_active == 5
    assert len(state.backlogs) == 5


def test_reset_index_out_of_range():
    config = EnvConfig()
    series = flat_series(1.0, n=10)
    with pytest.raises(IndexError):
        reset(config, series, 10)


def test_clamp_action_floor_and_ceiling():
    config = EnvConfig(n_max=30, action_limit=5)
    assert clamp_action(EnvState(3, 0.0, np.zeros(3)), -5, config) == -2
    assert clamp_action(EnvState(28, 0.0, np.zeros(28)), 5, config) == 2
    assert clamp_action(EnvState(10, 0.0, np.zeros(10)), 0, config) == 0


def test_clamp_action_rejects_out_of_space():
    config = EnvConfig(action_limit=5)
    with pytest.raises(ValueError):
        clamp_action(EnvState(3, 0.0, np.zeros(3)), 6, config)


def test_clamp_action_idempotent():
    config = EnvConfig(n_max=12, action_limit=5)
    rng = np.random.default_rng(0)
    for _ in range(300):
        n = int(rng.integers(1, 13))
        a = int(rng.integers(-5, 6))
        state = EnvState(n, 0.0, np.zeros(n))
        once = clamp_action(state, a, config)
        assert clamp_action(state, once, config) == once
        assert 1 <= n + once <= 12


def test_sample_shares_single_cpu():
    rng = np.random.default_rng(0)
    np.testing.assert_array_equal(sample_shares(1, 1000.0, rng), [1.0])


def test_sample_shares_moments():
    # Dirichlet(alpha..alpha) over n=4: mean 1/4, var = p(1-p)/(4a+1)
    rng = np.random.default_rng(7)
    draws = np.array([sample_shares(4, 1000.0, rng) for _ in range(10_000)])
    sums = draws.sum(axis=1)
    assert np.abs(sums - 1.0).max() < 1e-9
    means = draws.mean(axis=0)
    assert np.all(np.abs(means - 0.25) < 0.005)
    expected_std = np.sqrt(0.25 * 0.75 / 4001.0)
    stds = draws.std(axis=0)
    assert np.all(np.abs(stds - expected_std) < 0.2 * expected_std)


def test_sample_shares_validates():
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        sample_shares(0, 1.0, rng)
    with pytest.raises(ValueError):
        sample_shares(3, 0.0, rng)


def test_step_even_split_hand_values():
    config = EnvConfig(beta=1.0)
    state = EnvState(2, 1.0, np.zeros(2))
    out = step(state, 0, 1.2, config, np.random.default_rng(0),
               shares=np.array([0.5, 0.5]))
    np.testing.assert_allclose(out.cpu_loads, [0.6, 0.6])
    np.testing.assert_array_equal(out.next_state.backlogs, [0.0, 0.0])
    assert out.reward == pytest.approx(0.6)
    assert out.effective_action == 0


def test_step_overload_hand_values():
    config = EnvConfig(beta=1.0)
    state = EnvState(1, 1.0, np.zeros(1))
    out = step(state, 0, 2.5, config, np.random.default_rng(0))
    np.testing.assert_array_equal(out.cpu_loads, [1.0])
    np.testing.assert_array_equal(out.next_state.backlogs, [1.5])
    assert out.reward == pytest.approx(1.0 - 1.5)


def test_step_idle_system():
    config = EnvConfig()
    state = EnvState(4, 0.0, np.zeros(4))
    out = step(state, -1, 0.0, config, np.random.default_rng(0))
    assert out.reward == 0.0
    assert out.reward_min_load == 0.0
    assert out.reward_max_backlog == 0.0


def test_step_conservation_and_decomposition_fuzz():
    config = EnvConfig(n_max=20, action_limit=5, beta=1.0)
    rng = np.random.default_rng(42)
    state = reset(config, flat_series(1.0), 0)
    for _ in range(2000):
        action = int(rng.integers(-5, 6))
        next_w = float(rng.uniform(0, 25))
        out = step(state, action, next_w, config, rng)
        demand = out.shares * next_w + remap_backlogs(state.backlogs,
                                                      out.next_state.n_active)
        np.testing.assert_array_equal(out.cpu_loads + out.next_state.backlogs, demand)
        assert out.reward == out.reward_min_load - config.beta * out.reward_max_backlog
        assert out.reward <= 1.0
        assert np.all(out.cpu_loads <= 1.0)
        assert 1 <= out.next_state.n_active <= config.n_max
        state = out.next_state


def test_step_with_beta_zero_reward_is_min_load():
    config = EnvConfig(beta=0.0)
    state = EnvState(3, 1.0, np.zeros(3))
    out = step(state, 0, 2.0, config, np.random.default_rng(1))
    assert out.reward == out.reward_min_load


def test_remap_backlogs_conserves_work():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n_old = int(rng.integers(1, 12))
        n_new = int(rng.integers(1, 12))
        backlogs = rng.uniform(0, 4, n_old)
        remapped = remap_backlogs(backlogs, n_new)
        assert len(remapped) == n_new
        assert remapped.sum() == pytest.approx(backlogs.sum(), rel=1e-12)
        if n_new > n_old:
            np.testing.assert_array_equal(remapped[n_old:], 0.0)


def test_run_episode_constant_policy_flat_series():
    config = EnvConfig()
    log = run_episode(ConstantPolicy(0), flat_series(0.5), config, range(0, 50))
    assert len(log) == 50
    np.testing.assert_allclose(log.rewards(), 0.5)
    assert set(log.active_cpus()) == {1}


def test_run_episode_empty_window():
    config = EnvConfig()
    log = run_episode(ConstantPolicy(0), flat_series(0.5), config, range(5, 5))
    assert len(log) == 0


def test_run_episode_window_validation():
    config = EnvConfig()
    series = flat_series(0.5, n=20)
    with pytest.raises(IndexError):
        run_episode(ConstantPolicy(0), series, config, range(0, 20))
    run_episode(ConstantPolicy(0), series, config, range(0, 19))  # last valid


def test_run_episode_deterministic():
    config = EnvConfig(seed=9)
    series = WorkloadSeries(np.random.default_rng(5).uniform(0, 6, 100))
    a = run_episode(ConstantPolicy(1), series, config, range(0, 80))
    b = run_episode(ConstantPolicy(1), series, config, range(0, 80))
    np.testing.assert_array_equal(a.rewards(), b.rewards())
    np.testing.assert_array_equal(a.active_cpus(), b.active_cpus())


def test_episode_log_csv(tmp_path):
    config = EnvConfig()
    log = run_episode(ConstantPolicy(0), flat_series(0.5), config, range(0, 4))
    path = tmp_path / "episode.csv"
    log.write_csv(path)
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,N,W,action,effective_action,min_load,max_load,max_backlog,reward"
    assert len(lines) == 5
