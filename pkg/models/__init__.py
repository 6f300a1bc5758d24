"""
Value objects shared by every package:
- SnakeParams, SnakeState, LinkFrame, Trajectory: robot description and motion
- CostSpec, Obstacle: MPC objective parameters
- GaitMetrics, JointSpectrum, ParetoPoint, RobustnessRow, TimingSummary: experiment results
"""

from .exceptions import (
    ConfigError,
    NonFiniteExpansionError,
    NonFiniteStateError,
    NotPositiveDefiniteError,
    NumericalFailure,
    SingularSystemError,
    SnakeGaitError,
)
from .snake import ControlVector, LinkFrame, SnakeParams, SnakeState, Trajectory, clamp_controls, straight_state
from .cost_spec import CostSpec, Obstacle, disc_corridor, obstacles_from_dicts
from .reports import GaitMetrics, JointSpectrum, ParetoPoint, RobustnessRow, TimingSummary

__all__ = [
    'ConfigError',
    'NonFiniteExpansionError',
    'NonFiniteStateError',
    'NotPositiveDefiniteError',
    'NumericalFailure',
    'SingularSystemError',
    'SnakeGaitError',
    'ControlVector',
    'LinkFrame',
    'SnakeParams',
    'SnakeState',
    'Trajectory',
    'clamp_controls',
    'straight_state',
    'CostSpec',
    'Obstacle',
    'disc_corridor',
    'obstacles_from_dicts',
    'GaitMetrics',
    'JointSpectrum',
    'ParetoPoint',
    'RobustnessRow',
    'TimingSummary',
]
