"""environments/viscous.py: Anisotropic viscous friction (low Reynolds number swimmers)."""

from dataclasses import dataclass

import numpy as np

from models.snake import SnakeParams
from .base_environment import BaseEnvironment


def viscous_friction(v_local, c_l: float, c_t: float) -> np.ndarray:
    v_local = np.asarray(v_local, dtype=float)
    return np.stack([-c_l * v_local[..., 0], -c_t * v_local[..., 1]], axis=-1)


@dataclass(frozen=True)
class Viscous(BaseEnvironment):
    # Longitudinal coefficient 10x the transverse one by default; both are configurable.
    c_l: float = 10.0
    c_t: float = 1.0

    def _get_model_type(self) -> str:
        return 'viscous'

    def axial_forces(self, v_axial: np.ndarray, masses: np.ndarray, params: SnakeParams) -> np.ndarray:
        return viscous_friction(v_axial, self.c_l, self.c_t)
