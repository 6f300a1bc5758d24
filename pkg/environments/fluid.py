"""environments/fluid.py: Quadratic drag and anisotropic added mass (high Reynolds number swimmers)."""

from dataclasses import dataclass

import numpy as np

from models.exceptions import ConfigError
from models.snake import SnakeParams
from .base_environment import BaseEnvironment, smooth_sign


def drag_force(v_local, p: float, c_d: float, c_f: float, a: float, b: float, l: float) -> np.ndarray:
    """
    Quadratic drag on a link of cross-section a x b and length l.
    Longitudinal: skin friction over the wetted perimeter, -1/2*p*pi*C_f*(a+b)/4*l*sgn(v_l)*v_l**2.
    Transverse: bluff-body drag, -1/2*p*C_d*a*l*sgn(v_t)*v_t**2.
    """
    v_local = np.asarray(v_local, dtype=float)
    v_l, v_t = v_local[..., 0], v_local[..., 1]
    k_l = 0.5 * p * np.pi * c_f * (a + b) / 4.0 * l
    k_t = 0.5 * p * c_d * a * l
    return np.stack([-k_l * smooth_sign(v_l) * v_l**2, -k_t * smooth_sign(v_t) * v_t**2], axis=-1)


def added_mass(p: float, c_a: float, a: float, l: float) -> float:
    return p * np.pi * c_a * a**2 / 4.0 * l


def added_mass_matrix(p: float, c_a: float, a: float, l: float, m: float) -> np.ndarray:
    """diag(m, m + m_add) in (l, t) ordering; the displaced fluid only loads transverse motion."""
    return np.diag([m, m + added_mass(p, c_a, a, l)])


@dataclass(frozen=True)
class Fluid(BaseEnvironment):
    density: float = 1000.0
    c_d: float = 1.0
    c_f: float = 0.01
    c_a: float = 1.0
    in_plane_gravity: bool = False

    def __post_init__(self):
        super().__post_init__()
        if not self.density > 0:
            raise ConfigError(f'fluid.density must be > 0, got {self.density}')

    def _get_model_type(self) -> str:
        return 'fluid'

    def axial_forces(self, v_axial: np.ndarray, masses: np.ndarray, params: SnakeParams) -> np.ndarray:
        return drag_force(
            v_axial, self.density, self.c_d, self.c_f, params.cross_height, params.cross_width, params.link_lengths()
        )

    def mass_matrices(self, params: SnakeParams) -> np.ndarray:
        return np.array(
            [
                added_mass_matrix(self.density, self.c_a, params.cross_height, length, mass)
                for length, mass in zip(params.link_lengths(), params.link_masses())
            ]
        )
