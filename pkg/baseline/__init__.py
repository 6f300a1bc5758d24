"""
Serpenoid reference gaits:
- serpenoid: joint references, saturated PD tracking, RK4 rollouts
- grid_search: exhaustive search over gait and gain parameters
- pareto: speed/power front
"""

from .serpenoid import SerpenoidParams, pd_torque, rollout_serpenoid, serpenoid_reference
from .grid_search import GRID_AXES, GridSearchResult, GridSpec, ParamRange, evaluate_cell, grid_search
from .pareto import dominates, interpolate_power, pareto_front

__all__ = [
    'SerpenoidParams',
    'pd_torque',
    'rollout_serpenoid',
    'serpenoid_reference',
    'GRID_AXES',
    'GridSearchResult',
    'GridSpec',
    'ParamRange',
    'evaluate_cell',
    'grid_search',
    'dominates',
    'interpolate_power',
    'pareto_front',
]
