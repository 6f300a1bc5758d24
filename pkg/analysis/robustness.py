"""analysis/robustness.py: Speed lost when the planner's environment model is wrong."""

import logging
from typing import List, Optional, Sequence, Tuple

from tqdm import tqdm

from environments.base_environment import BaseEnvironment
from models.cost_spec import CostSpec
from models.reports import RobustnessRow
from models.snake import SnakeParams, SnakeState, straight_state
from optimization.mpc import MPCConfig, run_mpc
from utils.main_config import MEASURE_WINDOW
from .metrics import gait_metrics

logger = logging.getLogger(__name__)


def robustness_experiment(
    base_env: BaseEnvironment,
    deltas: Sequence[float],
    cost_spec: CostSpec,
    params: SnakeParams,
    mpc_config: MPCConfig,
    coefficient: str = 'c_t',
    window: Tuple[float, float] = MEASURE_WINDOW,
    x0: Optional[SnakeState] = None,
) -> List[RobustnessRow]:
    """
    For each delta, plan with `coefficient` scaled by (1 + delta) and execute on the nominal environment.
    The speed reduction is relative to the run whose planner uses the nominal model.
    """
    x0 = x0 if x0 is not None else straight_state(params)
    goal_direction = cost_spec.goal_array - x0.head_pos

    def speed(planner_env: BaseEnvironment) -> float:
        traj = run_mpc(x0, planner_env, base_env, params, cost_spec, mpc_config)
        return gait_metrics(traj, window[0], window[1], goal_direction).mean_speed

    nominal = speed(base_env)
    logger.info('Robustness: nominal %s speed %.4f m/s', base_env.kind, nominal)

    rows = []
    for delta in tqdm(deltas, desc='robustness', disable=len(deltas) < 2):
        perturbed = nominal if delta == 0 else speed(base_env.scaled(**{coefficient: 1.0 + delta}))
        row = RobustnessRow(delta=float(delta), speed_nominal=nominal, speed_perturbed=perturbed)
        logger.info('Robustness: delta=%.3f speed=%.4f reduction=%.4f', delta, perturbed, row.speed_reduction)
        rows.append(row)
    return rows
