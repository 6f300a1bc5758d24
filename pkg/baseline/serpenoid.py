"""baseline/serpenoid.py: Serpenoid joint references tracked by a saturated PD controller."""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np

from dynamics.integrators import rk4_vector
from dynamics.kinematics import StateLike, as_vector
from environments.base_environment import BaseEnvironment
from models.exceptions import ConfigError, NonFiniteStateError
from models.snake import ControlVector, SnakeParams, Trajectory, straight_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SerpenoidParams:
    amplitude: float  # rad
    frequency: float  # Hz
    phase_offset: float  # rad, between consecutive joints
    bias: float = 0.0  # rad, turning offset
    kp: float = 1.0  # N m / rad
    kd: float = 0.1  # N m s / rad

    def __post_init__(self):
        if not self.frequency > 0:
            raise ConfigError(f'frequency must be > 0, got {self.frequency}')
        if self.kp < 0 or self.kd < 0:
            raise ConfigError(f'PD gains must be >= 0, got kp={self.kp}, kd={self.kd}')

    @property
    def period(self) -> float:
        return 1.0 / self.frequency

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def serpenoid_reference(t, joint_index, params: SerpenoidParams):
    """Desired angle of joint i >= 1: amplitude * sin(2 pi f t + (i - 1) * phase_offset) + bias."""
    phase = 2.0 * np.pi * params.frequency * np.asarray(t) + (np.asarray(joint_index) - 1) * params.phase_offset
    return params.amplitude * np.sin(phase) + params.bias


def pd_torque(state: StateLike, t: float, params: SerpenoidParams, torque_limit: float) -> ControlVector:
    """tau_j = clamp(kp (q_ref_j - q_j) - kd qdot_j) for joints 1..n-1."""
    x = as_vector(state)
    n = (len(x) - 4) // 2
    joints = np.arange(1, n)
    q = x[3 : 2 + n]
    q_dot = x[5 + n :]
    torque = params.kp * (serpenoid_reference(t, joints, params) - q) - params.kd * q_dot
    return np.clip(torque, -torque_limit, torque_limit)


def rollout_serpenoid(
    params: SerpenoidParams,
    env: BaseEnvironment,
    snake_params: SnakeParams,
    duration: float,
) -> Trajectory:
    """RK4 rollout from the straight pose at rest; torques are sampled once per control period."""
    steps = int(round(duration / snake_params.dt))
    states = np.empty((steps + 1, snake_params.state_dim))
    controls = np.empty((steps, snake_params.n_joints))
    states[0] = straight_state(snake_params).to_vector()
    for k in range(steps):
        controls[k] = pd_torque(states[k], k * snake_params.dt, params, snake_params.torque_limit)
        states[k + 1] = rk4_vector(states[k], controls[k], snake_params.dt, env, snake_params)
        if not np.all(np.isfinite(states[k + 1])):
            raise NonFiniteStateError(k + 1, f'serpenoid rollout {params}')
    metadata = {'environment': env.kind, 'serpenoid': params.to_dict()}
    return Trajectory(dt=snake_params.dt, states=states, controls=controls, metadata=metadata)
