"""
dynamics/newton_euler.py: Per-step Newton-Euler equilibrium of the planar chain.

For fixed state and torques the unknowns enter linearly (reaction forces are evaluated explicitly
from the current velocities), so each evaluation is one dense LU solve.

Unknown layout (world frame, n links, 6n + 2 unknowns):
    a_j      proximal-joint linear acceleration of link j            2n
    wdot_i   angular acceleration of link i                           n
    qddot_i  relative joint acceleration (qddot_0 = wdot_0)           n
    g_j      force exerted by link j on link j-1 at joint j, j=0..n   2(n+1)   (g_0 = g_n = 0: free ends)

Equations:
    M_i (a_i + l_i/2 (wdot_i n_i - w_i^2 e_i)) = g_{i+1} - g_i + f_env_i [+ M_i (0, -g)]      Newton, 2n
    I_i wdot_i = T_i - T_{i+1} + l_i/2 (e_i x g_i + e_i x g_{i+1})                            Euler, n
    wdot_i - wdot_{i-1} - qddot_i = 0, wdot_0 - qddot_0 = 0                                     n
    a_i - a_{i-1} - l_{i-1} wdot_{i-1} n_{i-1} = -l_{i-1} w_{i-1}^2 e_{i-1}                     2(n-1)
    g_0 = 0, g_n = 0                                                                           4
with T_j = tau_j - mu_v * qdot_j the net joint torque (acting +T_j on link j, -T_j on link j-1), T_0 = T_n = 0.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from environments.base_environment import BaseEnvironment, axial_to_world
from models.exceptions import SingularSystemError
from models.snake import SnakeParams
from .kinematics import StateLike, as_vector, chain_kinematics, world_to_local

logger = logging.getLogger(__name__)

PIVOT_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DynamicsSolution:
    """Accelerations and internal forces of one evaluation. Local quantities use frame coordinates (x, y)."""

    joint_linear_acc: np.ndarray  # (n, 2) proximal joint of link j, in link j frame
    angular_acc: np.ndarray  # (n,) link angular accelerations
    rel_angular_acc: np.ndarray  # (n,) qddot; entry 0 is the absolute link-0 acceleration
    internal_forces: np.ndarray  # (n+1, 2) g_j in the frame of the link it acts on (link j-1; link 0 for j=0)
    head_acc_world: np.ndarray  # (2,)
    com_acc_world: np.ndarray  # (n, 2)
    internal_forces_world: np.ndarray  # (n+1, 2)
    residual: float  # max |A z - b| of the assembled system


def _frame_mass_matrices(axial: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """(l, t)-ordered mass matrices -> world-frame matrices R diag(...) R^T, shape (n, 2, 2)."""
    swap = np.array([[0.0, 1.0], [1.0, 0.0]])
    frame = swap @ axial @ swap  # frame coordinates: x transverse, y longitudinal
    cos, sin = np.cos(angles), np.sin(angles)
    rot = np.empty((len(angles), 2, 2))
    rot[:, 0, 0], rot[:, 0, 1] = cos, -sin
    rot[:, 1, 0], rot[:, 1, 1] = sin, cos
    return rot @ frame @ np.transpose(rot, (0, 2, 1))


def net_joint_torques(x: np.ndarray, u: Sequence[float], params: SnakeParams) -> np.ndarray:
    """T_0..T_n with T_0 = T_n = 0 and T_j = tau_j - mu_v * qdot_j."""
    n = params.n_links
    torques = np.zeros(n + 1)
    torques[1:n] = np.asarray(u, dtype=float) - params.joint_viscous_coeff * x[5 + n : 4 + 2 * n]
    return torques


def solve_accelerations(
    state: StateLike,
    u: Sequence[float],
    env: BaseEnvironment,
    params: SnakeParams,
) -> DynamicsSolution:
    x = as_vector(state)
    n = params.n_links
    lengths = params.link_lengths()
    inertias = params.link_inertias()
    chain = chain_kinematics(x, params)
    e, nrm, w = chain.axes, chain.normals, chain.rates

    mass_w = _frame_mass_matrices(env.mass_matrices(params), chain.angles)
    f_env = axial_to_world(env.axial_forces(chain.axial_com_vel(), params.link_masses(), params), chain.angles)
    if env.in_plane_gravity:
        f_env = f_env + mass_w @ np.array([0.0, -params.gravity])
    torques = net_joint_torques(x, u, params)

    size = 6 * n + 2
    A = np.zeros((size, size))
    b = np.zeros(size)

    def acc(j):
        return slice(2 * j, 2 * j + 2)

    def wdot(i):
        return 2 * n + i

    def qddot(i):
        return 3 * n + i

    def force(j):
        return slice(4 * n + 2 * j, 4 * n + 2 * j + 2)

    row = 0
    for i in range(n):
        half = 0.5 * lengths[i]
        # Newton
        rows = slice(row, row + 2)
        A[rows, acc(i)] = mass_w[i]
        A[rows, wdot(i)] = half * mass_w[i] @ nrm[i]
        A[rows, force(i + 1)] = -np.eye(2)
        A[rows, force(i)] = np.eye(2)
        b[rows] = f_env[i] + half * w[i] ** 2 * mass_w[i] @ e[i]
        row += 2
        # Euler about the CoM; e x g = e_x g_y - e_y g_x
        A[row, wdot(i)] = inertias[i]
        for j in (i, i + 1):
            A[row, 4 * n + 2 * j] += half * e[i, 1]
            A[row, 4 * n + 2 * j + 1] += -half * e[i, 0]
        b[row] = torques[i] - torques[i + 1]
        row += 1

    # angular chaining
    A[row, wdot(0)] = 1.0
    A[row, qddot(0)] = -1.0
    row += 1
    for i in range(1, n):
        A[row, wdot(i)] = 1.0
        A[row, wdot(i - 1)] = -1.0
        A[row, qddot(i)] = -1.0
        row += 1

    # linear chaining
    for i in range(1, n):
        rows = slice(row, row + 2)
        A[rows, acc(i)] = np.eye(2)
        A[rows, acc(i - 1)] = -np.eye(2)
        A[rows, wdot(i - 1)] = -lengths[i - 1] * nrm[i - 1]
        b[rows] = -lengths[i - 1] * w[i - 1] ** 2 * e[i - 1]
        row += 2

    # free ends
    for j in (0, n):
        A[row : row + 2, force(j)] = np.eye(2)
        row += 2

    lu, piv = lu_factor(A, check_finite=False)
    min_pivot = np.min(np.abs(np.diag(lu)))
    if not min_pivot > PIVOT_TOLERANCE:
        raise SingularSystemError(f'Newton-Euler system is singular (min pivot {min_pivot:.3e})')
    z = lu_solve((lu, piv), b, check_finite=False)
    residual = float(np.max(np.abs(A @ z - b)))

    joint_acc = z[: 2 * n].reshape(n, 2)
    angular_acc = z[2 * n : 3 * n]
    forces_world = z[4 * n :].reshape(n + 1, 2)
    com_acc = joint_acc + 0.5 * lengths[:, None] * (angular_acc[:, None] * nrm - (w**2)[:, None] * e)
    force_frames = chain.angles[np.r_[0, np.arange(n)]]

    return DynamicsSolution(
        joint_linear_acc=world_to_local(joint_acc, chain.angles),
        angular_acc=angular_acc,
        rel_angular_acc=z[3 * n : 4 * n].copy(),
        internal_forces=world_to_local(forces_world, force_frames),
        head_acc_world=joint_acc[0].copy(),
        com_acc_world=com_acc,
        internal_forces_world=forces_world,
        residual=residual,
    )


def state_derivative(
    state: StateLike,
    u: Sequence[float],
    env: BaseEnvironment,
    params: SnakeParams,
) -> np.ndarray:
    """d/dt [head_pos, angles, head_vel, angle_rates]."""
    x = as_vector(state)
    n = params.n_links
    solution = solve_accelerations(x, u, env, params)
    dx = np.empty_like(x)
    dx[: 2 + n] = x[2 + n :]
    dx[2 + n : 4 + n] = solution.head_acc_world
    dx[4 + n :] = solution.rel_angular_acc
    return dx
