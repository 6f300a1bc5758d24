"""Long-running checks of the friction model and the dynamics against brute-force references."""

import logging

import numpy as np
import pytest

from dynamics.integrators import rk4_vector
from dynamics.invariants import angular_momentum, kinetic_energy, linear_momentum
from dynamics.newton_euler import state_derivative
from environments import BoxDry, Fluid, SmoothDry, Viscous, smooth_dry_friction
from models.snake import SnakeParams, SnakeState
from test.unit.test_dynamics import maximal_coordinates_derivative

logger = logging.getLogger(__name__)

pytestmark = pytest.mark.slow

G = 9.81
M = 0.2
MU_L, MU_T = 0.1, 0.9


def test_smooth_dry_friction_is_maximally_dissipative():
    rng = np.random.default_rng(2024)
    angles = np.linspace(0.0, 2.0 * np.pi, 1_000_000, endpoint=False)
    boundary = np.stack([M * G * MU_L * np.cos(angles), M * G * MU_T * np.sin(angles)], axis=1)
    speeds = rng.uniform(0.5, 5.0, 10_000)
    directions = rng.uniform(0.0, 2.0 * np.pi, 10_000)
    velocities = speeds[:, None] * np.stack([np.cos(directions), np.sin(directions)], axis=1)
    forces = smooth_dry_friction(velocities, M, G, MU_L, MU_T)
    dissipation = -np.sum(forces * velocities, axis=1)

    worst = 0.0
    for chunk in np.array_split(np.arange(len(velocities)), 1000):
        best = np.max(-boundary @ velocities[chunk].T, axis=0)
        worst = max(worst, float(np.max(np.abs(dissipation[chunk] - best) / best)))
    logger.info('Largest relative dissipation gap: %.3e', worst)
    assert worst < 1e-4


@pytest.mark.parametrize('n_links', [3, 5])
@pytest.mark.parametrize('env', [BoxDry(), SmoothDry(), Viscous(), Fluid()], ids=lambda env: env.kind)
def test_dynamics_match_the_maximal_coordinates_oracle(env, n_links):
    params = SnakeParams(n_links=n_links)
    rng = np.random.default_rng(n_links)
    for _ in range(100):
        state = SnakeState(
            head_pos=rng.uniform(-1, 1, 2),
            angles=rng.uniform(-1.0, 1.0, n_links),
            head_vel=rng.uniform(-1, 1, 2),
            angle_rates=rng.uniform(-2, 2, n_links),
        )
        u = rng.uniform(-params.torque_limit, params.torque_limit, params.n_joints)
        np.testing.assert_allclose(
            state_derivative(state, u, env, params),
            maximal_coordinates_derivative(state, u, env, params),
            rtol=1e-6,
            atol=1e-9,
        )


def test_ten_second_free_rollout_conserves_momenta_and_energy():
    params = SnakeParams()
    free_space = Viscous(c_l=0.0, c_t=0.0)
    x = SnakeState(
        head_pos=[0.0, 0.0],
        angles=[0.2, -0.1, 0.15, -0.2, 0.1],
        head_vel=[0.1, -0.05],
        angle_rates=[0.2, 0.0, -0.1, 0.1, 0.0],
    ).to_vector()
    p0, l0, e0 = linear_momentum(x, params), angular_momentum(x, params), kinetic_energy(x, params)
    scale = max(np.linalg.norm(p0), abs(l0), 1.0)

    steps = 1000
    work = 0.0
    n = params.n_links
    for k in range(steps):
        u = 0.002 * np.sin(2 * np.pi * k * params.dt + np.arange(params.n_joints))
        x_next = rk4_vector(x, u, params.dt, free_space, params)
        work += float(u @ (x_next[3 : 2 + n] - x[3 : 2 + n]))
        x = x_next
        if (k + 1) % 100 == 0:
            budget = 1e-6 * scale * (k + 1) / 100
            assert np.linalg.norm(linear_momentum(x, params) - p0) < budget
            assert abs(angular_momentum(x, params) - l0) < budget

    assert kinetic_energy(x, params) - e0 == pytest.approx(work, rel=1e-4, abs=1e-9)
