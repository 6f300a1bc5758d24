# environments/base_environment.py
import logging
from abc import ABC, abstractmethod
from dataclasses import asdict, fields, replace
from typing import Any, Dict, Sequence

import numpy as np

from models.exceptions import ConfigError
from models.snake import LinkFrame, SnakeParams

logger = logging.getLogger(__name__)

# Smoothing width of sgn(x) ~ tanh(x / SIGN_SMOOTHING) for box friction and drag, in m/s
SIGN_SMOOTHING = 1e-3

# Largest linearized reaction-force relaxation rate times dt that `for_explicit_step` admits
EXPLICIT_STEP_RATE = 1.0


def smooth_sign(x: np.ndarray, width: float = SIGN_SMOOTHING) -> np.ndarray:
    return np.tanh(np.asarray(x, dtype=float) / width)


class BaseEnvironment(ABC):
    """
    Abstract base class for reaction-force strategies.
    Concrete environments are frozen dataclasses; they implement `axial_forces` and may override
    `mass_matrices` (added mass) and `in_plane_gravity`.
    All force vectors exchanged with the force laws use (longitudinal, transverse) ordering.
    """

    in_plane_gravity: bool = False

    @abstractmethod
    def _get_model_type(self) -> str:
        """Return the environment identifier used in configs and file names."""

    @abstractmethod
    def axial_forces(self, v_axial: np.ndarray, masses: np.ndarray, params: SnakeParams) -> np.ndarray:
        """Reaction forces (n, 2) in (l, t) ordering for CoM velocities `v_axial` (n, 2)."""

    @property
    def kind(self) -> str:
        return self._get_model_type()

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool):
                continue
            if not np.isfinite(value) or value < 0:
                raise ConfigError(f'{self.kind}.{f.name} must be finite and >= 0, got {value}')

    def mass_matrices(self, params: SnakeParams) -> np.ndarray:
        """Per-link translational mass matrices (n, 2, 2) in (l, t) ordering."""
        masses = params.link_masses()
        out = np.zeros((params.n_links, 2, 2))
        out[:, 0, 0] = masses
        out[:, 1, 1] = masses
        return out

    def link_forces(self, frames: Sequence[LinkFrame], params: SnakeParams) -> np.ndarray:
        """World-frame reaction force (n, 2) applied at each link's centre of mass."""
        v_axial = np.array([frame.axial_velocity for frame in frames])
        angles = np.array([frame.angle for frame in frames])
        return axial_to_world(self.axial_forces(v_axial, params.link_masses(), params), angles)

    def dissipated_power(self, frames: Sequence[LinkFrame], params: SnakeParams) -> float:
        """Instantaneous power of the reaction forces (never positive)."""
        forces = self.link_forces(frames, params)
        velocities = np.array([frame.com_vel_world for frame in frames])
        return float(np.sum(forces * velocities))

    def scaled(self, **factors: float) -> 'BaseEnvironment':
        """Copy with the named coefficients multiplied by the given factors."""
        unknown = set(factors) - {f.name for f in fields(self)}
        if unknown:
            raise ConfigError(f'{self.kind} has no coefficient(s) {sorted(unknown)}')
        return replace(self, **{name: getattr(self, name) * factor for name, factor in factors.items()})

    def for_explicit_step(self, params: SnakeParams) -> 'BaseEnvironment':
        """
        Copy whose force law an explicit step of params.dt integrates without overshoot near rest.
        Stiff regularized friction widens its smoothing; other environments return themselves.
        """
        return self

    def to_dict(self) -> Dict[str, Any]:
        return {'kind': self.kind, **asdict(self)}


def axial_to_world(forces_axial: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Rotate (l, t) vectors expressed in link frames into world coordinates."""
    cos, sin = np.cos(angles), np.sin(angles)
    f_l, f_t = forces_axial[:, 0], forces_axial[:, 1]
    # frame x axis (transverse) = (cos, sin); frame y axis (longitudinal) = (-sin, cos)
    return np.stack([f_t * cos - f_l * sin, f_t * sin + f_l * cos], axis=-1)
