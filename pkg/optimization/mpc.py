"""optimization/mpc.py: Receding-horizon control on top of iLQR."""

import logging
import time
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from tqdm import tqdm

from dynamics.integrators import Integrator
from dynamics.kinematics import StateLike, as_vector
from environments.base_environment import BaseEnvironment
from models.cost_spec import CostSpec
from models.exceptions import ConfigError, NonFiniteStateError
from models.snake import SnakeParams, Trajectory
from .costs import SnakeCost
from .ilqr import ILQRConfig, SnakeTransition, optimize, planning_model

logger = logging.getLogger(__name__)

# Frequency of the first plan's torque wave in Hz; one period spans the default horizon
SEED_FREQUENCY = 4.0


@dataclass(frozen=True)
class MPCConfig:
    ilqr: ILQRConfig = field(default_factory=ILQRConfig)
    apply_steps: int = 1
    total_steps: int = 600
    eval_integrator: Integrator = Integrator.RK4
    eval_env: Optional[BaseEnvironment] = None
    seed_amplitude: float = 0.2
    show_progress: bool = False

    def __post_init__(self):
        object.__setattr__(self, 'eval_integrator', Integrator(self.eval_integrator))
        if not 1 <= self.apply_steps <= self.ilqr.horizon:
            raise ConfigError(f'apply_steps must lie in [1, horizon={self.ilqr.horizon}], got {self.apply_steps}')
        if self.total_steps < 1:
            raise ConfigError(f'total_steps must be >= 1, got {self.total_steps}')
        if not self.seed_amplitude >= 0:
            raise ConfigError(f'seed_amplitude must be >= 0, got {self.seed_amplitude}')

    def to_dict(self):
        return {
            'ilqr': self.ilqr.to_dict(),
            'apply_steps': self.apply_steps,
            'total_steps': self.total_steps,
            'eval_integrator': self.eval_integrator.value,
            'eval_env': self.eval_env.to_dict() if self.eval_env is not None else None,
            'seed_amplitude': self.seed_amplitude,
        }


@dataclass(frozen=True)
class PlanRecord:
    """Outcome of one horizon optimization, handed to the run_mpc callback."""

    step: int
    seconds: float
    iterations: int
    cost: float
    converged: bool


def seed_controls(
    horizon: int, n_joints: int, amplitude: float, dt: float, frequency: float = SEED_FREQUENCY
) -> np.ndarray:
    """Travelling torque wave amplitude * sin(2 pi f t - j pi / 2) used as the first plan's initial guess."""
    t = np.arange(horizon)[:, None] * dt
    j = np.arange(n_joints)[None, :]
    return amplitude * np.sin(2.0 * np.pi * frequency * t - 0.5 * np.pi * j)


def shift_controls(controls: np.ndarray, shift: int) -> np.ndarray:
    """Drop the first `shift` controls and zero-pad the tail."""
    shifted = np.zeros_like(controls)
    if shift < len(controls):
        shifted[: len(controls) - shift] = controls[shift:]
    return shifted


def run_mpc(
    x0: StateLike,
    env_plan: BaseEnvironment,
    env_eval: Optional[BaseEnvironment],
    params: SnakeParams,
    cost_spec: CostSpec,
    config: MPCConfig,
    callback: Optional[Callable[[PlanRecord], None]] = None,
) -> Trajectory:
    """
    Plan with env_plan and the iLQR integrator, execute apply_steps controls with env_eval and the
    evaluation integrator, warm-start and repeat until total_steps controls have been executed.
    env_eval falls back to config.eval_env, then to env_plan.
    """
    env_eval = env_eval or config.eval_env or env_plan
    horizon = config.ilqr.horizon
    planner = planning_model(env_plan, params, config.ilqr)
    evaluator = SnakeTransition(env_eval, params, config.eval_integrator)
    cost = SnakeCost(cost_spec, params)

    states = np.empty((config.total_steps + 1, params.state_dim))
    controls = np.empty((config.total_steps, params.n_joints))
    states[0] = as_vector(x0)
    # zero torques about a straight pose give a zero cost gradient, so the first plan starts from a small wave
    u_plan = seed_controls(horizon, params.n_joints, config.seed_amplitude, params.dt)

    logger.info(
        'MPC: %s planner / %s evaluator, %d steps, horizon %d',
        env_plan.kind,
        env_eval.kind,
        config.total_steps,
        horizon,
    )
    executed = 0
    with tqdm(total=config.total_steps, desc=f'MPC {env_eval.kind}', disable=not config.show_progress) as bar:
        while executed < config.total_steps:
            started = time.perf_counter()
            result = optimize(states[executed], u_plan, planner, cost, config.ilqr)
            if callback is not None:
                callback(
                    PlanRecord(
                        step=executed,
                        seconds=time.perf_counter() - started,
                        iterations=result.iterations_used,
                        cost=result.cost,
                        converged=result.converged,
                    )
                )

            planned = result.trajectory.controls
            n_apply = min(config.apply_steps, config.total_steps - executed)
            for j in range(n_apply):
                k = executed + j
                controls[k] = planned[j]
                states[k + 1] = evaluator.step(states[k], controls[k])
                if not np.all(np.isfinite(states[k + 1])):
                    raise NonFiniteStateError(k + 1, f'{env_eval.kind} evaluation diverged')
            executed += n_apply
            u_plan = shift_controls(planned, n_apply)
            bar.update(n_apply)

    metadata = {
        'environment': env_eval.kind,
        'planner_environment': env_plan.kind,
        'cost': cost_spec.to_dict(),
        'mpc': config.to_dict(),
    }
    return Trajectory(dt=params.dt, states=states, controls=controls, metadata=metadata)
