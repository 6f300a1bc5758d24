"""
Gait synthesis by trajectory optimization:
- costs: goal, effort and obstacle terms and the SnakeCost model
- ilqr: finite-difference iLQR with regularization and line search, planning_model for stiff friction
- mpc: receding-horizon loop with planner/evaluator split
"""

from .costs import (
    SnakeCost,
    effort_cost,
    final_cost,
    goal_cost,
    min_clearance,
    obstacle_cost,
    obstacle_distances,
    point_segment_distance,
    running_cost,
    segment_obstacle_distance,
)
from .ilqr import (
    Gains,
    ILQRConfig,
    ILQRResult,
    SnakeTransition,
    backward_pass,
    forward_pass,
    linearize_dynamics,
    optimize,
    optimize_gait,
    planning_model,
    rollout,
    total_cost,
)
from .mpc import MPCConfig, PlanRecord, run_mpc, seed_controls, shift_controls

__all__ = [
    'SnakeCost',
    'effort_cost',
    'final_cost',
    'goal_cost',
    'min_clearance',
    'obstacle_cost',
    'obstacle_distances',
    'point_segment_distance',
    'running_cost',
    'segment_obstacle_distance',
    'Gains',
    'ILQRConfig',
    'ILQRResult',
    'SnakeTransition',
    'backward_pass',
    'forward_pass',
    'linearize_dynamics',
    'optimize',
    'optimize_gait',
    'planning_model',
    'rollout',
    'total_cost',
    'MPCConfig',
    'PlanRecord',
    'run_mpc',
    'seed_controls',
    'shift_controls',
]
