"""optimization/costs.py: Goal, effort and obstacle costs of the gait-synthesis objective."""

import logging
from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.special import expit

from dynamics.kinematics import StateLike, as_vector, segment_endpoints
from models.cost_spec import CostSpec, Obstacle
from models.snake import LinkFrame, SnakeParams, Trajectory

logger = logging.getLogger(__name__)

# Step of the finite-difference gradient/Hessian of the goal and obstacle terms
COST_FD_EPSILON = 1e-4


# --- Geometry ---


def point_segment_distance(point: np.ndarray, start: np.ndarray, end: np.ndarray) -> np.ndarray:
    """Euclidean distance from point(s) to segment(s); broadcasts over leading axes."""
    seg = end - start
    seg_len2 = np.sum(seg * seg, axis=-1)
    rel = point - start
    t = np.where(seg_len2 > 0, np.sum(rel * seg, axis=-1) / np.where(seg_len2 > 0, seg_len2, 1.0), 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = start + t[..., None] * seg
    return np.linalg.norm(point - closest, axis=-1)


def segment_obstacle_distance(link: LinkFrame, params: SnakeParams, obs: Obstacle) -> float:
    """Signed clearance between a link segment and a disc: negative iff they intersect."""
    distance = point_segment_distance(np.asarray(obs.center), link.joint_pos, link.distal_pos)
    return float(distance - obs.radius)


def obstacle_distances(state: StateLike, params: SnakeParams, obstacles: Sequence[Obstacle]) -> np.ndarray:
    """Signed distances d_ij, shape (n_obstacles, n_links)."""
    if not obstacles:
        return np.zeros((0, params.n_links))
    segments = segment_endpoints(state, params)  # (n, 2, 2)
    centers = np.array([o.center for o in obstacles])[:, None, :]  # (k, 1, 2)
    radii = np.array([o.radius for o in obstacles])[:, None]
    return point_segment_distance(centers, segments[None, :, 0], segments[None, :, 1]) - radii


# --- Cost terms ---


def goal_cost(head_pos: np.ndarray, spec: CostSpec) -> float:
    """alpha * sqrt(|p_goal - p0|^2 + eps^2): smooth stand-in for the Euclidean distance."""
    delta = spec.goal_array - np.asarray(head_pos, dtype=float)
    return float(spec.alpha * np.sqrt(delta @ delta + spec.goal_smoothing_eps**2))


def effort_cost(u: Sequence[float], spec: CostSpec) -> float:
    u = np.asarray(u, dtype=float)
    return float(spec.beta * (u @ u))


def obstacle_cost(state: StateLike, spec: CostSpec, params: SnakeParams) -> float:
    """Sum over (obstacle, link) pairs of A / (1 + exp(2 s d_ij))."""
    if not spec.obstacles:
        return 0.0
    d = obstacle_distances(state, params, spec.obstacles)
    return float(spec.obstacle_amplitude * np.sum(expit(-2.0 * spec.obstacle_steepness * d)))


def running_cost(state: StateLike, u: Sequence[float], spec: CostSpec, params: SnakeParams) -> float:
    x = as_vector(state)
    return goal_cost(x[0:2], spec) + effort_cost(u, spec) + obstacle_cost(x, spec, params)


def final_cost(state: StateLike, spec: CostSpec, params: SnakeParams) -> float:
    x = as_vector(state)
    return goal_cost(x[0:2], spec) + obstacle_cost(x, spec, params)


def min_clearance(traj: Trajectory, params: SnakeParams, obstacles: Sequence[Obstacle]) -> float:
    """Smallest d_ij over every state of a trajectory (inf without obstacles)."""
    if not obstacles:
        return float('inf')
    return float(min(np.min(obstacle_distances(x, params, obstacles)) for x in traj.states))


# --- Derivatives ---


def fd_gradient_hessian(
    fn: Callable[[np.ndarray], float], x: np.ndarray, indices: Sequence[int], h: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Central-difference gradient and Hessian of fn restricted to the coordinates in `indices`."""
    dim = len(x)
    grad = np.zeros(dim)
    hess = np.zeros((dim, dim))
    f0 = fn(x)
    plus, minus = {}, {}
    for i in indices:
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        plus[i], minus[i] = fn(xp), fn(xm)
        grad[i] = (plus[i] - minus[i]) / (2 * h)
        hess[i, i] = (plus[i] - 2 * f0 + minus[i]) / h**2
    for a, i in enumerate(indices):
        for j in indices[a + 1 :]:
            corners = []
            for si, sj in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
                xc = x.copy()
                xc[i] += si * h
                xc[j] += sj * h
                corners.append(fn(xc))
            hess[i, j] = hess[j, i] = (corners[0] - corners[1] - corners[2] + corners[3]) / (4 * h**2)
    return grad, hess


@dataclass(frozen=True)
class SnakeCost:
    """
    Cost model consumed by the optimizer: analytic derivatives for the effort term,
    finite differences for goal and obstacle terms (over the head position, plus the
    joint angles when obstacles are present).
    """

    spec: CostSpec
    params: SnakeParams
    fd_epsilon: float = COST_FD_EPSILON

    def running(self, x: np.ndarray, u: np.ndarray) -> float:
        return running_cost(x, u, self.spec, self.params)

    def final(self, x: np.ndarray) -> float:
        return final_cost(x, self.spec, self.params)

    def _state_term(self, x: np.ndarray) -> float:
        return goal_cost(x[0:2], self.spec) + obstacle_cost(x, self.spec, self.params)

    def _state_indices(self) -> list:
        if self.spec.obstacles:
            return list(range(2 + self.params.n_links))
        return [0, 1]

    def derivatives(self, x: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, ...]:
        """(l_x, l_u, l_xx, l_uu, l_ux)."""
        l_x, l_xx = self.final_derivatives(x)
        m = len(u)
        l_u = 2.0 * self.spec.beta * np.asarray(u, dtype=float)
        l_uu = 2.0 * self.spec.beta * np.eye(m)
        l_ux = np.zeros((m, len(x)))
        return l_x, l_u, l_xx, l_uu, l_ux

    def final_derivatives(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        return fd_gradient_hessian(self._state_term, np.asarray(x, dtype=float), self._state_indices(), self.fd_epsilon)
