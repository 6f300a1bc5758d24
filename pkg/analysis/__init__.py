"""
Gait analysis:
- metrics: goal-ward speed, joint power, power dissipated into the environment, heading
- spectrum: dominant DFT component per joint
- robustness: planner/evaluator model mismatch
"""

from .metrics import (
    center_of_mass,
    gait_metrics,
    heading_change,
    heading_series,
    mean_dissipated_power,
    mean_heading,
    mean_power,
    window_indices,
)
from .spectrum import joint_spectrum
from .robustness import robustness_experiment

__all__ = [
    'center_of_mass',
    'gait_metrics',
    'heading_change',
    'heading_series',
    'mean_dissipated_power',
    'mean_heading',
    'mean_power',
    'window_indices',
    'joint_spectrum',
    'robustness_experiment',
]
