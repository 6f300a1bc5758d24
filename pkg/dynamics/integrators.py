"""dynamics/integrators.py: Explicit Euler and classical RK4 with zero-order-hold controls."""

from enum import Enum
from typing import Sequence

import numpy as np

from environments.base_environment import BaseEnvironment
from models.snake import SnakeParams, SnakeState
from .newton_euler import state_derivative


def euler_vector(x: np.ndarray, u: Sequence[float], dt: float, env: BaseEnvironment, params: SnakeParams) -> np.ndarray:
    return x + dt * state_derivative(x, u, env, params)


def rk4_vector(x: np.ndarray, u: Sequence[float], dt: float, env: BaseEnvironment, params: SnakeParams) -> np.ndarray:
    k1 = state_derivative(x, u, env, params)
    k2 = state_derivative(x + 0.5 * dt * k1, u, env, params)
    k3 = state_derivative(x + 0.5 * dt * k2, u, env, params)
    k4 = state_derivative(x + dt * k3, u, env, params)
    return x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def step_euler(
    state: SnakeState, u: Sequence[float], dt: float, env: BaseEnvironment, params: SnakeParams
) -> SnakeState:
    """Faster integrator, used inside the planner."""
    return SnakeState.from_vector(euler_vector(state.to_vector(), u, dt, env, params))


def step_rk4(state: SnakeState, u: Sequence[float], dt: float, env: BaseEnvironment, params: SnakeParams) -> SnakeState:
    """More accurate integrator, used to evaluate gaits."""
    return SnakeState.from_vector(rk4_vector(state.to_vector(), u, dt, env, params))


class Integrator(str, Enum):
    EULER = 'euler'
    RK4 = 'rk4'

    def step_vector(
        self, x: np.ndarray, u: Sequence[float], dt: float, env: BaseEnvironment, params: SnakeParams
    ) -> np.ndarray:
        if self is Integrator.EULER:
            return euler_vector(x, u, dt, env, params)
        return rk4_vector(x, u, dt, env, params)
