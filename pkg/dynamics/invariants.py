"""dynamics/invariants.py: Mechanical energy and momenta of a snake state (rigid-body masses only)."""

import numpy as np

from models.snake import SnakeParams
from .kinematics import StateLike, chain_kinematics


def kinetic_energy(state: StateLike, params: SnakeParams) -> float:
    chain = chain_kinematics(state, params)
    translational = 0.5 * np.sum(params.link_masses() * np.sum(chain.com_vel**2, axis=1))
    rotational = 0.5 * np.sum(params.link_inertias() * chain.rates**2)
    return float(translational + rotational)


def linear_momentum(state: StateLike, params: SnakeParams) -> np.ndarray:
    chain = chain_kinematics(state, params)
    return params.link_masses() @ chain.com_vel


def angular_momentum(state: StateLike, params: SnakeParams) -> float:
    """About the world origin."""
    chain = chain_kinematics(state, params)
    orbital = chain.com_pos[:, 0] * chain.com_vel[:, 1] - chain.com_pos[:, 1] * chain.com_vel[:, 0]
    return float(np.sum(params.link_masses() * orbital) + np.sum(params.link_inertias() * chain.rates))
