"""models/snake.py: Robot parameters, state, link frames and trajectories."""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, Optional, Sequence

import numpy as np

from .exceptions import ConfigError

# Joint torques, shape (n_links - 1,)
ControlVector = np.ndarray


def _frozen(values: Sequence[float], size: Optional[int] = None, name: str = 'array') -> np.ndarray:
    array = np.array(values, dtype=float)
    if size is not None and array.shape != (size,):
        raise ConfigError(f'{name} must have shape ({size},), got {array.shape}')
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class SnakeParams:
    """Geometric, inertial and joint constants of a uniform n-link snake."""

    n_links: int = 5
    link_length: float = 0.2
    link_mass: float = 0.2
    cross_height: float = 0.15
    cross_width: float = 0.05
    joint_viscous_coeff: float = 0.0
    torque_limit: float = 1.0
    gravity: float = 9.81
    dt: float = 0.01

    def __post_init__(self):
        if int(self.n_links) != self.n_links or self.n_links < 2:
            raise ConfigError(f'n_links must be an integer >= 2, got {self.n_links}')
        for name in ('link_length', 'link_mass', 'cross_height', 'cross_width', 'gravity', 'dt', 'torque_limit'):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ConfigError(f'{name} must be strictly positive, got {value}')
        if not np.isfinite(self.joint_viscous_coeff) or self.joint_viscous_coeff < 0:
            raise ConfigError(f'joint_viscous_coeff must be >= 0, got {self.joint_viscous_coeff}')

    @property
    def n_joints(self) -> int:
        return self.n_links - 1

    @property
    def state_dim(self) -> int:
        return 2 * self.n_links + 4

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.link_masses()))

    # Per-link accessors. Dynamics and kinematics read lengths and masses only through these,
    # so a non-uniform robot only needs to override them.
    def link_lengths(self) -> np.ndarray:
        return np.full(self.n_links, self.link_length)

    def link_masses(self) -> np.ndarray:
        return np.full(self.n_links, self.link_mass)

    def link_inertias(self) -> np.ndarray:
        """Rod moment of inertia about each link's centre of mass."""
        return self.link_masses() * self.link_lengths() ** 2 / 12.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SnakeState:
    """Head pose, joint angles and their rates.

    angles[0] is the absolute world angle of link 0; angles[1:] are relative joint angles (counterclockwise).
    """

    head_pos: np.ndarray
    angles: np.ndarray
    head_vel: np.ndarray
    angle_rates: np.ndarray

    def __post_init__(self):
        n = len(np.atleast_1d(self.angles))
        object.__setattr__(self, 'head_pos', _frozen(self.head_pos, 2, 'head_pos'))
        object.__setattr__(self, 'angles', _frozen(self.angles, n, 'angles'))
        object.__setattr__(self, 'head_vel', _frozen(self.head_vel, 2, 'head_vel'))
        object.__setattr__(self, 'angle_rates', _frozen(self.angle_rates, n, 'angle_rates'))
        if not np.all(np.isfinite(self.to_vector())):
            raise ConfigError('SnakeState entries must be finite')

    @property
    def n_links(self) -> int:
        return len(self.angles)

    @property
    def joint_angles(self) -> np.ndarray:
        return self.angles[1:]

    @property
    def joint_rates(self) -> np.ndarray:
        return self.angle_rates[1:]

    def to_vector(self) -> np.ndarray:
        """Layout [x0, y0, q0..q_{n-1}, vx0, vy0, dq0..dq_{n-1}]."""
        return np.concatenate([self.head_pos, self.angles, self.head_vel, self.angle_rates])

    @staticmethod
    def from_vector(vector: Sequence[float]) -> 'SnakeState':
        vector = np.asarray(vector, dtype=float)
        if vector.ndim != 1 or vector.size < 8 or vector.size % 2:
            raise ConfigError(f'State vector of size {vector.size} does not describe a snake with >= 2 links')
        n = (vector.size - 4) // 2
        return SnakeState(
            head_pos=vector[0:2],
            angles=vector[2 : 2 + n],
            head_vel=vector[2 + n : 4 + n],
            angle_rates=vector[4 + n :],
        )


def straight_state(
    params: SnakeParams,
    heading: Sequence[float] = (-1.0, 0.0),
    head_pos: Sequence[float] = (0.0, 0.0),
    head_vel: Sequence[float] = (0.0, 0.0),
) -> SnakeState:
    """Straight snake at rest whose head faces `heading`, body extended behind it."""
    hx, hy = np.asarray(heading, dtype=float) / np.linalg.norm(heading)
    # longitudinal axis e0 = (-sin q0, cos q0) points from head towards the tail, i.e. -heading
    q0 = np.arctan2(hx, -hy)
    angles = np.zeros(params.n_links)
    angles[0] = q0
    return SnakeState(
        head_pos=head_pos,
        angles=angles,
        head_vel=head_vel,
        angle_rates=np.zeros(params.n_links),
    )


def clamp_controls(u: Sequence[float], torque_limit: float) -> ControlVector:
    return np.clip(np.asarray(u, dtype=float), -torque_limit, torque_limit)


@dataclass(frozen=True)
class LinkFrame:
    """Kinematic snapshot of one link.

    com_vel_local is in frame coordinates: x = transverse, y = longitudinal.
    """

    joint_pos: np.ndarray
    angle: float
    com_pos: np.ndarray
    com_vel_world: np.ndarray
    com_vel_local: np.ndarray
    length: float
    angular_vel: float = 0.0

    @property
    def v_longitudinal(self) -> float:
        return float(self.com_vel_local[1])

    @property
    def v_transverse(self) -> float:
        return float(self.com_vel_local[0])

    @property
    def axial_velocity(self) -> np.ndarray:
        """(v_l, v_t) ordering used by the reaction-force laws."""
        return np.array([self.com_vel_local[1], self.com_vel_local[0]])

    @property
    def direction(self) -> np.ndarray:
        """Unit longitudinal axis in world coordinates."""
        return np.array([-np.sin(self.angle), np.cos(self.angle)])

    @property
    def distal_pos(self) -> np.ndarray:
        return self.joint_pos + self.length * self.direction


@dataclass(frozen=True)
class Trajectory:
    """States (T+1 rows) and controls (T rows) at a fixed time step.

    Rows are flat state vectors; for snakes use `snake_state(k)` to get a SnakeState.
    """

    dt: float
    states: np.ndarray
    controls: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        states = np.array(self.states, dtype=float, ndmin=2)
        controls = np.array(self.controls, dtype=float)
        if controls.ndim == 1:
            controls = controls.reshape(len(controls), -1) if len(controls) else np.zeros((0, 0))
        if not self.dt > 0:
            raise ConfigError(f'Trajectory dt must be positive, got {self.dt}')
        if len(states) != len(controls) + 1:
            raise ConfigError(f'Trajectory needs len(states) == len(controls) + 1, got {len(states)}/{len(controls)}')
        states.setflags(write=False)
        controls.setflags(write=False)
        object.__setattr__(self, 'states', states)
        object.__setattr__(self, 'controls', controls)

    def __len__(self) -> int:
        return len(self.controls)

    @property
    def duration(self) -> float:
        return len(self) * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.states)) * self.dt

    @property
    def n_links(self) -> int:
        return (self.states.shape[1] - 4) // 2

    @property
    def head_positions(self) -> np.ndarray:
        return self.states[:, 0:2]

    @property
    def angles(self) -> np.ndarray:
        n = self.n_links
        return self.states[:, 2 : 2 + n]

    @property
    def angle_rates(self) -> np.ndarray:
        n = self.n_links
        return self.states[:, 4 + n :]

    def snake_state(self, k: int) -> SnakeState:
        return SnakeState.from_vector(self.states[k])

    def index_of(self, t: float) -> int:
        """Nearest sample index for time t."""
        return int(round(t / self.dt))
