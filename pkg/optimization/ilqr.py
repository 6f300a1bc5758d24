r"""
optimization/ilqr.py: Iterative LQR with finite-difference dynamics linearization.

Each iteration:
1. linearize the one-step transition x' = f(x, u) along the nominal trajectory (central differences);
2. backward pass: Riccati-style recursion on the quadratic expansion, Levenberg regularization on Q_uu;
3. forward pass: roll out u_t = u_bar_t + alpha * k_t + K_t (x_t - x_bar_t), torques clamped, over a
   decreasing list of step sizes until the total cost decreases.
The regularization shrinks after an accepted step and grows after a rejected one.
Iterations stop once the predicted or achieved decrease falls below cost_tolerance * max(1, |J|), or when the
expansion stops being finite; the best trajectory found so far is returned.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, NamedTuple, Optional, Protocol, Sequence, Tuple

import numpy as np
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from dynamics.integrators import Integrator
from environments.base_environment import BaseEnvironment
from models.cost_spec import CostSpec
from models.exceptions import ConfigError, NonFiniteExpansionError, NotPositiveDefiniteError
from models.snake import SnakeParams, Trajectory
from .costs import SnakeCost

logger = logging.getLogger(__name__)


class TransitionModel(Protocol):
    n_state: int
    n_control: int
    control_limit: float
    dt: float

    def step(self, x: np.ndarray, u: np.ndarray) -> np.ndarray: ...


class CostModel(Protocol):
    def running(self, x: np.ndarray, u: np.ndarray) -> float: ...

    def final(self, x: np.ndarray) -> float: ...

    def derivatives(self, x: np.ndarray, u: np.ndarray) -> Tuple[np.ndarray, ...]: ...

    def final_derivatives(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]: ...


@dataclass(frozen=True)
class SnakeTransition:
    """One control period of the snake dynamics with the selected integrator."""

    env: BaseEnvironment
    params: SnakeParams
    integrator: Integrator = Integrator.EULER

    @property
    def n_state(self) -> int:
        return self.params.state_dim

    @property
    def n_control(self) -> int:
        return self.params.n_joints

    @property
    def control_limit(self) -> float:
        return self.params.torque_limit

    @property
    def dt(self) -> float:
        return self.params.dt

    def step(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        return self.integrator.step_vector(x, u, self.params.dt, self.env, self.params)


@dataclass(frozen=True)
class ILQRConfig:
    horizon: int = 25
    max_iterations: int = 10
    fd_epsilon: float = 1e-5
    reg_init: float = 1e-6
    reg_min: float = 1e-8
    reg_max: float = 1e10
    reg_scale: float = 10.0
    line_search_alphas: Tuple[float, ...] = (1.0, 0.5, 0.25, 0.1, 0.05, 0.01, 0.001)
    cost_tolerance: float = 1e-9
    integrator: Integrator = Integrator.EULER
    workers: int = 1
    stabilize_environment: bool = True

    def __post_init__(self):
        object.__setattr__(self, 'integrator', Integrator(self.integrator))
        object.__setattr__(self, 'line_search_alphas', tuple(float(a) for a in self.line_search_alphas))
        if self.horizon < 1:
            raise ConfigError(f'horizon must be >= 1, got {self.horizon}')
        if self.max_iterations < 1:
            raise ConfigError(f'max_iterations must be >= 1, got {self.max_iterations}')
        if not self.line_search_alphas or not all(0 < a <= 1 for a in self.line_search_alphas):
            raise ConfigError(f'line_search_alphas must lie in (0, 1], got {self.line_search_alphas}')
        if not 0 < self.reg_min <= self.reg_init <= self.reg_max:
            raise ConfigError('Regularization schedule needs 0 < reg_min <= reg_init <= reg_max')
        if self.reg_scale <= 1 or self.fd_epsilon <= 0 or self.cost_tolerance < 0 or self.workers < 1:
            raise ConfigError('reg_scale must be > 1, fd_epsilon > 0, cost_tolerance >= 0, workers >= 1')

    def to_dict(self):
        return {
            'horizon': self.horizon,
            'max_iterations': self.max_iterations,
            'fd_epsilon': self.fd_epsilon,
            'reg_init': self.reg_init,
            'reg_min': self.reg_min,
            'reg_max': self.reg_max,
            'reg_scale': self.reg_scale,
            'line_search_alphas': list(self.line_search_alphas),
            'cost_tolerance': self.cost_tolerance,
            'integrator': self.integrator.value,
            'workers': self.workers,
            'stabilize_environment': self.stabilize_environment,
        }


@dataclass
class ILQRResult:
    trajectory: Trajectory
    cost_history: List[float] = field(default_factory=list)
    converged: bool = False
    iterations_used: int = 0

    @property
    def cost(self) -> float:
        return self.cost_history[-1]


class Gains(NamedTuple):
    k: np.ndarray  # (T, m) feedforward
    K: np.ndarray  # (T, m, n) feedback
    expected_decrease: float


# --- Building blocks ---


def linearize_dynamics(
    model: TransitionModel, x: np.ndarray, u: np.ndarray, fd_epsilon: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Central-difference Jacobians A = df/dx, B = df/du of the one-step transition."""
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    A = np.empty((len(x), len(x)))
    B = np.empty((len(x), len(u)))
    for i in range(len(x)):
        dx = np.zeros_like(x)
        dx[i] = fd_epsilon
        A[:, i] = (model.step(x + dx, u) - model.step(x - dx, u)) / (2 * fd_epsilon)
    for j in range(len(u)):
        du = np.zeros_like(u)
        du[j] = fd_epsilon
        B[:, j] = (model.step(x, u + du) - model.step(x, u - du)) / (2 * fd_epsilon)
    return A, B


def linearize_trajectory(
    model: TransitionModel, nominal: Trajectory, fd_epsilon: float, workers: int = 1
) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Jacobians at every step; the steps are independent and may run on a thread pool."""
    args = [(nominal.states[t], nominal.controls[t]) for t in range(len(nominal))]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda a: linearize_dynamics(model, a[0], a[1], fd_epsilon), args))
    return [linearize_dynamics(model, x, u, fd_epsilon) for x, u in args]


def cost_derivatives(cost: CostModel, nominal: Trajectory):
    running = [cost.derivatives(nominal.states[t], nominal.controls[t]) for t in range(len(nominal))]
    return running, cost.final_derivatives(nominal.states[-1])


def rollout(model: TransitionModel, x0: np.ndarray, controls: np.ndarray) -> Trajectory:
    controls = np.clip(np.asarray(controls, dtype=float), -model.control_limit, model.control_limit)
    states = np.empty((len(controls) + 1, len(x0)))
    states[0] = x0
    for t, u in enumerate(controls):
        states[t + 1] = model.step(states[t], u)
        if not np.all(np.isfinite(states[t + 1])):
            states[t + 1 :] = np.nan
            break
    return Trajectory(dt=model.dt, states=states, controls=controls)


def total_cost(cost: CostModel, traj: Trajectory) -> float:
    if not np.all(np.isfinite(traj.states)):
        return float('inf')
    running = sum(cost.running(traj.states[t], traj.controls[t]) for t in range(len(traj)))
    return float(running + cost.final(traj.states[-1]))


def backward_pass(
    nominal: Trajectory,
    dyn_derivs: Sequence[Tuple[np.ndarray, np.ndarray]],
    cost_derivs,
    reg: float,
) -> Gains:
    """
    Affine policy du = k_t + K_t dx for every step.
    Raises NotPositiveDefiniteError if Q_uu + reg*I is not PD and NonFiniteExpansionError if the expansion overflows.
    """
    running, (v_x, v_xx) = cost_derivs
    horizon = len(nominal)
    m = nominal.controls.shape[1]
    n = nominal.states.shape[1]
    k = np.zeros((horizon, m))
    K = np.zeros((horizon, m, n))
    d1 = d2 = 0.0

    for t in range(horizon - 1, -1, -1):
        A, B = dyn_derivs[t]
        l_x, l_u, l_xx, l_uu, l_ux = running[t]
        q_x = l_x + A.T @ v_x
        q_u = l_u + B.T @ v_x
        q_xx = l_xx + A.T @ v_xx @ A
        q_ux = l_ux + B.T @ v_xx @ A
        q_uu = l_uu + B.T @ v_xx @ B
        q_uu = 0.5 * (q_uu + q_uu.T)
        if not (np.all(np.isfinite(q_uu)) and np.all(np.isfinite(q_u)) and np.all(np.isfinite(q_ux))):
            raise NonFiniteExpansionError(t)

        try:
            factor = cho_factor(q_uu + reg * np.eye(m))
        except LinAlgError:
            raise NotPositiveDefiniteError(t, reg)
        k[t] = -cho_solve(factor, q_u)
        K[t] = -cho_solve(factor, q_ux)

        d1 += k[t] @ q_u
        d2 += 0.5 * k[t] @ q_uu @ k[t]
        v_x = q_x + K[t].T @ q_uu @ k[t] + K[t].T @ q_u + q_ux.T @ k[t]
        v_xx = q_xx + K[t].T @ q_uu @ K[t] + K[t].T @ q_ux + q_ux.T @ K[t]
        v_xx = 0.5 * (v_xx + v_xx.T)

    return Gains(k=k, K=K, expected_decrease=float(-(d1 + d2)))


def forward_pass(
    nominal: Trajectory,
    gains: Gains,
    alpha: float,
    model: TransitionModel,
    cost: CostModel,
) -> Tuple[Trajectory, float]:
    """Closed-loop rollout of the updated policy on the nonlinear model, with clamped controls."""
    horizon = len(nominal)
    states = np.empty_like(nominal.states)
    controls = np.empty_like(nominal.controls)
    states[0] = nominal.states[0]
    for t in range(horizon):
        u = nominal.controls[t] + alpha * gains.k[t] + gains.K[t] @ (states[t] - nominal.states[t])
        controls[t] = np.clip(u, -model.control_limit, model.control_limit)
        states[t + 1] = model.step(states[t], controls[t])
        if not np.all(np.isfinite(states[t + 1])):
            states[t + 1 :] = np.nan
            controls[t + 1 :] = 0.0
            break
    candidate = Trajectory(dt=nominal.dt, states=states, controls=controls)
    return candidate, total_cost(cost, candidate)


# --- Driver ---


def _expansion_is_finite(derivs) -> bool:
    dyn, (running, final) = derivs
    arrays = [a for pair in dyn for a in pair] + [a for terms in running for a in terms] + list(final)
    return all(np.all(np.isfinite(a)) for a in arrays)


def regularized_backward_pass(
    nominal: Trajectory, derivs, reg: float, config: ILQRConfig
) -> Tuple[Optional[Gains], float]:
    """Backward pass with reg grown until Q_uu + reg*I is PD; gains are None once reg passes reg_max."""
    while reg <= config.reg_max:
        try:
            return backward_pass(nominal, derivs[0], derivs[1], reg), reg
        except NotPositiveDefiniteError as e:
            logger.debug('Backward pass failed: %s', e)
            reg *= config.reg_scale
    return None, reg


def optimize(
    x0: np.ndarray,
    u_init: np.ndarray,
    model: TransitionModel,
    cost: CostModel,
    config: ILQRConfig,
) -> ILQRResult:
    """Locally optimal controls from u_init; a non-finite initial rollout comes back unchanged with converged=False."""
    u_init = np.asarray(u_init, dtype=float)
    if len(u_init) != config.horizon:
        raise ConfigError(f'u_init has {len(u_init)} steps, horizon is {config.horizon}')

    nominal = rollout(model, np.asarray(x0, dtype=float), u_init)
    current = total_cost(cost, nominal)
    history = [current]
    if not np.isfinite(current):
        logger.warning('iLQR: initial rollout is not finite, returning it unchanged')
        return ILQRResult(trajectory=nominal, cost_history=history, converged=False, iterations_used=0)

    reg = config.reg_init
    converged = False
    iterations = 0
    derivs = None

    while iterations < config.max_iterations:
        iterations += 1
        if derivs is None:
            derivs = (
                linearize_trajectory(model, nominal, config.fd_epsilon, config.workers),
                cost_derivatives(cost, nominal),
            )
            if not _expansion_is_finite(derivs):
                logger.warning('iLQR: non-finite derivatives at iteration %d', iterations)
                break

        try:
            gains, reg = regularized_backward_pass(nominal, derivs, reg, config)
        except NonFiniteExpansionError as e:
            logger.warning('iLQR: %s at iteration %d', e, iterations)
            break
        if gains is None:
            logger.warning('iLQR: regularization exceeded reg_max=%.1e in backward pass', config.reg_max)
            break

        if gains.expected_decrease <= config.cost_tolerance * max(abs(current), 1.0):
            converged = True
            break

        accepted = False
        for alpha in config.line_search_alphas:
            candidate, candidate_cost = forward_pass(nominal, gains, alpha, model, cost)
            if candidate_cost < current:
                accepted = True
                break

        if accepted:
            improvement = (current - candidate_cost) / max(abs(current), 1.0)
            nominal, current = candidate, candidate_cost
            history.append(current)
            derivs = None
            reg = max(reg / config.reg_scale, config.reg_min)
            logger.debug('iLQR iter %d: cost=%.6g alpha=%.3g reg=%.1e', iterations, current, alpha, reg)
            if improvement < config.cost_tolerance:
                converged = True
                break
        else:
            reg *= config.reg_scale
            if reg > config.reg_max:
                logger.warning('iLQR: every line-search step rejected at reg_max=%.1e', config.reg_max)
                break

    return ILQRResult(trajectory=nominal, cost_history=history, converged=converged, iterations_used=iterations)


def planning_model(env: BaseEnvironment, params: SnakeParams, config: ILQRConfig) -> SnakeTransition:
    """Internal model of the optimizer; stiff friction is widened for the explicit step unless disabled."""
    planned = env.for_explicit_step(params) if config.stabilize_environment else env
    if planned is not env:
        logger.info('Planner smooths %s for dt=%g: %s', env.kind, params.dt, planned.to_dict())
    return SnakeTransition(planned, params, config.integrator)


def optimize_gait(
    x0: np.ndarray,
    u_init: Optional[np.ndarray],
    env: BaseEnvironment,
    params: SnakeParams,
    cost_spec: CostSpec,
    config: ILQRConfig,
) -> ILQRResult:
    """Snake-specific entry point: internal model with the configured integrator, cold start by default."""
    model = planning_model(env, params, config)
    if u_init is None:
        u_init = np.zeros((config.horizon, params.n_joints))
    return optimize(x0, u_init, model, SnakeCost(cost_spec, params), config)
