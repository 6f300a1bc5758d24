"""
Reproduction runs of the locomotion experiments: 6 s MPC gaits in every environment, the serpenoid
Pareto comparison, the joint spectra, the turning and corridor tasks, planner mismatch and timing.
Each module-level fixture runs full-length MPC, so expect minutes per environment.
"""

import logging
import os
from pathlib import Path

import numpy as np
import pytest

import main
from analysis.metrics import gait_metrics, heading_change
from analysis.robustness import robustness_experiment
from analysis.spectrum import joint_spectrum
from baseline.grid_search import grid_search
from baseline.pareto import interpolate_power, pareto_front
from models.snake import straight_state
from optimization.costs import min_clearance
from optimization.mpc import run_mpc
from utils.config_loader import load_config
from utils.main_config import PROJECT_ROOT
from utils.trajectory_io import read_table

logger = logging.getLogger(__name__)

pytestmark = pytest.mark.slow

CONFIG_DIR = Path(PROJECT_ROOT) / 'configs'
ENVIRONMENTS = ('dry', 'viscous', 'fluid')


def _mpc(config, env_name, cost=None):
    cost = cost or config.cost
    env = config.environment_named(env_name)
    return run_mpc(straight_state(config.snake), env, None, config.snake, cost, config.mpc)


@pytest.fixture(scope='module')
def default_config():
    return load_config(CONFIG_DIR / 'default.yaml')


@pytest.fixture(scope='module')
def gaits(default_config):
    """One 6 s MPC gait per locomotion environment, all with the same cost and solver settings."""
    return {name: _mpc(default_config, name) for name in ENVIRONMENTS}


@pytest.fixture(scope='module')
def gait_metrics_by_env(gaits, default_config):
    window = default_config.analysis.window
    return {name: gait_metrics(traj, window[0], window[1], (-1.0, 0.0)) for name, traj in gaits.items()}


# --- Locomotion ---


def test_one_parameter_set_moves_the_snake_in_every_environment(gait_metrics_by_env):
    for name, metrics in gait_metrics_by_env.items():
        logger.info('%s: speed %.3f m/s, power %.3f W', name, metrics.mean_speed, metrics.mean_power)
        assert metrics.mean_speed > 0, name


def test_dry_gait_speed(gait_metrics_by_env):
    assert gait_metrics_by_env['dry'].mean_speed >= 0.8


# --- Pareto comparison ---


@pytest.mark.parametrize('env_name', ENVIRONMENTS)
def test_mpc_gait_is_near_the_serpenoid_front(env_name, gait_metrics_by_env):
    config = load_config(CONFIG_DIR / 'grid_reduced.yaml')
    result = grid_search(
        config.grid,
        config.environment_named(env_name),
        config.snake,
        duration=config.duration,
        window=config.analysis.window,
        workers=os.cpu_count() or 1,
    )
    front = pareto_front(result.points)
    assert front
    mpc = gait_metrics_by_env[env_name]
    reference = interpolate_power(front, mpc.mean_speed)
    logger.info('%s: MPC %.3f W, front %.3f W at %.3f m/s', env_name, mpc.mean_power, reference, mpc.mean_speed)
    assert mpc.mean_power <= 1.5 * reference


# --- Joint spectra ---


def test_joints_share_one_dominant_frequency(gaits, default_config):
    window = default_config.analysis.window
    for name, traj in gaits.items():
        spectrum = joint_spectrum(traj, window[0], window[1])
        logger.info('%s: %s', name, spectrum.to_rows())
        assert spectrum.shares_frequency(), name


def test_fluid_gait_amplitude_grows_towards_the_tail(gaits, default_config):
    window = default_config.analysis.window
    amplitude = joint_spectrum(gaits['fluid'], window[0], window[1]).dominant_amplitude
    assert amplitude[-1] / amplitude[0] >= 2.0


@pytest.mark.parametrize('env_name', ['dry', 'viscous'])
def test_ground_gait_amplitude_is_nondecreasing(env_name, gaits, default_config):
    window = default_config.analysis.window
    amplitude = joint_spectrum(gaits[env_name], window[0], window[1]).dominant_amplitude
    assert np.all(np.diff(amplitude) >= 0)


# --- Turning and corridor ---


def test_sharp_turn():
    config = load_config(CONFIG_DIR / 'sharp_turn.yaml')
    traj = _mpc(config, 'dry')
    change = heading_change(traj, 0.0, config.duration)
    logger.info('Heading change %.1f deg', np.degrees(change))
    assert abs(change) >= np.radians(60.0)


def test_tunnel_is_crossed_without_contact():
    config = load_config(CONFIG_DIR / 'tunnel.yaml')
    traj = _mpc(config, 'dry')
    exit_x = min(o.center[0] for o in config.cost.obstacles)
    assert min_clearance(traj, config.snake, config.cost.obstacles) > 0
    assert traj.head_positions[:, 0].min() < exit_x


# --- Planner mismatch and timing ---


def test_viscous_transverse_mismatch_costs_little_speed():
    config = load_config(CONFIG_DIR / 'robustness.yaml')
    rows = robustness_experiment(
        config.environment_named('viscous'), (0.0, 0.05, 0.25), config.cost, config.snake, config.mpc
    )
    reduction = {row.delta: row.speed_reduction for row in rows}
    assert rows[0].speed_nominal > 0
    assert reduction[0.05] <= 0.10
    assert reduction[0.25] <= 0.15


def test_bench_report(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    argv = ['bench', '--config', str(CONFIG_DIR / 'default.yaml'), '--output', str(tmp_path), '--threads', '1']
    assert main.main(argv) == main.EXIT_OK
    assert 'mean' in (tmp_path / 'bench_dry.md').read_text()
    seconds = read_table(tmp_path / 'bench_dry_timings.csv')['seconds']
    assert len(seconds) == 600
    assert np.isfinite(seconds.mean()) and seconds.std() >= 0
