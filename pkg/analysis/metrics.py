"""analysis/metrics.py: Speed, joint power, dissipated power and heading measured on trajectories."""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from dynamics.kinematics import as_vector, chain_kinematics, forward_kinematics
from environments.base_environment import BaseEnvironment
from models.exceptions import ConfigError
from models.reports import GaitMetrics
from models.snake import SnakeParams, Trajectory
from utils.main_config import POWER_MODES, SPEED_REFERENCES

logger = logging.getLogger(__name__)

# Slack when comparing a window bound with the trajectory duration, in s
WINDOW_TOLERANCE = 1e-9


def window_indices(traj: Trajectory, window_start: float, window_end: float) -> Tuple[int, int]:
    if not 0 <= window_start < window_end <= traj.duration + WINDOW_TOLERANCE:
        raise ConfigError(
            f'Window [{window_start}, {window_end}] does not fit in a trajectory of {traj.duration:.6g} s'
        )
    k0, k1 = traj.index_of(window_start), traj.index_of(window_end)
    if k1 <= k0:
        raise ConfigError(f'Window [{window_start}, {window_end}] is shorter than one time step')
    return k0, k1


def _unit(direction: Sequence[float]) -> np.ndarray:
    direction = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(direction)
    if not norm > 0:
        raise ConfigError(f'goal_direction must be non-zero, got {direction}')
    return direction / norm


def center_of_mass(state, params: SnakeParams) -> np.ndarray:
    chain = chain_kinematics(state, params)
    masses = params.link_masses()
    return masses @ chain.com_pos / masses.sum()


def mean_power(traj: Trajectory, k0: int, k1: int, mode: str = 'absolute') -> float:
    """Average of sum_j tau_j * qdot_j over steps k0..k1-1, each torque paired with the mean rate of its step."""
    if mode not in POWER_MODES:
        raise ConfigError(f'Unknown power mode {mode!r}; expected one of {POWER_MODES}')
    rates = traj.angle_rates[:, 1:]
    mid_rates = 0.5 * (rates[k0:k1] + rates[k0 + 1 : k1 + 1])
    power = traj.controls[k0:k1] * mid_rates
    if mode == 'absolute':
        power = np.abs(power)
    return float(np.mean(np.sum(power, axis=1)))


def mean_dissipated_power(
    traj: Trajectory, env: BaseEnvironment, params: SnakeParams, window_start: float, window_end: float
) -> float:
    """Mean power removed by the environment's reaction forces over the window samples (>= 0)."""
    k0, k1 = window_indices(traj, window_start, window_end)
    power = [env.dissipated_power(forward_kinematics(traj.states[k], params), params) for k in range(k0, k1 + 1)]
    return float(-np.mean(power))


def gait_metrics(
    traj: Trajectory,
    window_start: float,
    window_end: float,
    goal_direction: Sequence[float] = (-1.0, 0.0),
    power_mode: str = 'absolute',
    speed_reference: str = 'head',
    params: Optional[SnakeParams] = None,
) -> GaitMetrics:
    """Goal-ward mean speed and mean joint power over the window."""
    if speed_reference not in SPEED_REFERENCES:
        raise ConfigError(f'Unknown speed reference {speed_reference!r}; expected one of {SPEED_REFERENCES}')
    k0, k1 = window_indices(traj, window_start, window_end)
    direction = _unit(goal_direction)

    if speed_reference == 'head':
        displacement = traj.states[k1, 0:2] - traj.states[k0, 0:2]
    else:
        if params is None:
            raise ConfigError('speed_reference="com" needs the snake parameters')
        displacement = center_of_mass(traj.states[k1], params) - center_of_mass(traj.states[k0], params)

    t0, t1 = k0 * traj.dt, k1 * traj.dt
    return GaitMetrics(
        mean_speed=float(displacement @ direction) / (t1 - t0),
        mean_power=mean_power(traj, k0, k1, power_mode),
        window_start=t0,
        window_end=t1,
    )


def mean_heading(state) -> float:
    """Circular mean of the directions the links face (head side), in radians."""
    x = as_vector(state)
    n = (len(x) - 4) // 2
    theta = np.cumsum(x[2 : 2 + n])
    # facing direction is -e_i = (sin, -cos)
    return float(np.arctan2(-np.mean(np.cos(theta)), np.mean(np.sin(theta))))


def heading_series(traj: Trajectory) -> np.ndarray:
    return np.unwrap([mean_heading(x) for x in traj.states])


def heading_change(traj: Trajectory, window_start: float, window_end: float) -> float:
    """Largest absolute change of the unwrapped mean heading within the window, relative to its start."""
    k0, k1 = window_indices(traj, window_start, window_end)
    headings = heading_series(traj)[k0 : k1 + 1]
    return float(np.max(np.abs(headings - headings[0])))
