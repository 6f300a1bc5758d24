"""environments/dry_friction.py: Box and smooth maximum-dissipation dry friction."""

from dataclasses import dataclass, replace

import numpy as np

from models.exceptions import ConfigError
from models.snake import SnakeParams
from .base_environment import EXPLICIT_STEP_RATE, SIGN_SMOOTHING, BaseEnvironment, smooth_sign

# Regularization of the smooth model's normalizer, as a fraction of m*g
NORMALIZER_EPS_FRACTION = 1e-4


def box_friction(v_local, m, g: float, mu_l: float, mu_t: float, width: float = SIGN_SMOOTHING) -> np.ndarray:
    """Component-wise Coulomb friction -m*g*diag(mu_l, mu_t)*sgn(v), with a tanh-smoothed sgn."""
    v_local = np.asarray(v_local, dtype=float)
    weight = np.asarray(m, dtype=float) * g
    f_l = -weight * mu_l * smooth_sign(v_local[..., 0], width)
    f_t = -weight * mu_t * smooth_sign(v_local[..., 1], width)
    return np.stack([f_l, f_t], axis=-1)


def smooth_dry_friction(
    v_local, m, g: float, mu_l: float, mu_t: float, eps_fraction: float = NORMALIZER_EPS_FRACTION
) -> np.ndarray:
    """
    Anisotropic dry friction obeying maximum dissipation on the friction ellipse
    with semi-axes m*g*mu_l (longitudinal) and m*g*mu_t (transverse).

    The dissipation-maximizing point on the ellipse is
        f_l = -m*g*mu_l**2*v_l / N,  f_t = -m*g*mu_t**2*v_t / N,  N = sqrt(mu_l**2*v_l**2 + mu_t**2*v_t**2),
    with N regularized by m*g*eps_fraction so the force is continuous through v = 0.
    """
    v_local = np.asarray(v_local, dtype=float)
    weight = np.asarray(m, dtype=float) * g
    v_l, v_t = v_local[..., 0], v_local[..., 1]
    eps = eps_fraction * weight
    norm = np.sqrt((mu_l * v_l) ** 2 + (mu_t * v_t) ** 2 + eps**2)
    return np.stack([-weight * mu_l**2 * v_l / norm, -weight * mu_t**2 * v_t / norm], axis=-1)


@dataclass(frozen=True)
class BoxDry(BaseEnvironment):
    """Box (component-wise) dry friction. Discontinuous in direction; kept as the classic comparison model."""

    mu_l: float = 0.1
    mu_t: float = 0.9
    sign_width: float = SIGN_SMOOTHING

    def __post_init__(self):
        super().__post_init__()
        if not self.sign_width > 0:
            raise ConfigError(f'box.sign_width must be > 0, got {self.sign_width}')

    def _get_model_type(self) -> str:
        return 'box'

    def axial_forces(self, v_axial: np.ndarray, masses: np.ndarray, params: SnakeParams) -> np.ndarray:
        return box_friction(v_axial, masses, params.gravity, self.mu_l, self.mu_t, self.sign_width)

    def for_explicit_step(self, params: SnakeParams) -> 'BoxDry':
        # slope of the force per unit mass at v = 0 is g * mu / sign_width
        width = params.gravity * max(self.mu_l, self.mu_t) * params.dt / EXPLICIT_STEP_RATE
        return self if width <= self.sign_width else replace(self, sign_width=width)


@dataclass(frozen=True)
class SmoothDry(BaseEnvironment):
    mu_l: float = 0.1
    mu_t: float = 0.9
    eps_fraction: float = NORMALIZER_EPS_FRACTION

    def __post_init__(self):
        super().__post_init__()
        if not self.eps_fraction > 0:
            raise ConfigError(f'dry.eps_fraction must be > 0, got {self.eps_fraction}')

    def _get_model_type(self) -> str:
        return 'dry'

    def axial_forces(self, v_axial: np.ndarray, masses: np.ndarray, params: SnakeParams) -> np.ndarray:
        return smooth_dry_friction(v_axial, masses, params.gravity, self.mu_l, self.mu_t, self.eps_fraction)

    def for_explicit_step(self, params: SnakeParams) -> 'SmoothDry':
        # relaxation rate near v = 0 is mu**2 / (eps_fraction * m) for the lightest link
        mu = max(self.mu_l, self.mu_t)
        eps = mu**2 * params.dt / (EXPLICIT_STEP_RATE * float(np.min(params.link_masses())))
        return self if eps <= self.eps_fraction else replace(self, eps_fraction=eps)
