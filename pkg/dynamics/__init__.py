"""
Planar n-link snake dynamics:
- forward_kinematics: link frames from a state
- solve_accelerations / state_derivative: Newton-Euler equilibrium with environment reaction forces
- step_euler / step_rk4: explicit integrators with zero-order-hold controls
"""

from .kinematics import (
    ChainKinematics,
    as_vector,
    chain_kinematics,
    forward_kinematics,
    local_to_world,
    segment_endpoints,
    world_to_local,
)
from .newton_euler import DynamicsSolution, solve_accelerations, state_derivative
from .integrators import Integrator, euler_vector, rk4_vector, step_euler, step_rk4
from .invariants import angular_momentum, kinetic_energy, linear_momentum

__all__ = [
    'ChainKinematics',
    'as_vector',
    'chain_kinematics',
    'forward_kinematics',
    'local_to_world',
    'segment_endpoints',
    'world_to_local',
    'DynamicsSolution',
    'solve_accelerations',
    'state_derivative',
    'Integrator',
    'euler_vector',
    'rk4_vector',
    'step_euler',
    'step_rk4',
    'angular_momentum',
    'kinetic_energy',
    'linear_momentum',
]
