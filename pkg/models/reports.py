"""models/reports.py: Result records written by the experiments."""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Tuple

import numpy as np

from .exceptions import ConfigError


@dataclass(frozen=True)
class GaitMetrics:
    """Speed and power measured over [window_start, window_end]."""

    mean_speed: float
    mean_power: float
    window_start: float
    window_end: float

    def __post_init__(self):
        if not self.window_end > self.window_start:
            raise ConfigError(f'window_end ({self.window_end}) must exceed window_start ({self.window_start})')

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class JointSpectrum:
    """Dominant DFT component of each joint angle signal."""

    dominant_frequency: np.ndarray
    dominant_amplitude: np.ndarray

    @property
    def n_joints(self) -> int:
        return len(self.dominant_frequency)

    def shares_frequency(self) -> bool:
        """True when every joint has the same dominant bin."""
        return bool(np.all(self.dominant_frequency == self.dominant_frequency[0]))

    def to_rows(self) -> List[Dict[str, Any]]:
        return [
            {'joint': j + 1, 'frequency': float(f), 'amplitude': float(a)}
            for j, (f, a) in enumerate(zip(self.dominant_frequency, self.dominant_amplitude))
        ]


@dataclass(frozen=True)
class ParetoPoint:
    speed: float
    power: float
    params: Dict[str, float] = field(default_factory=dict, compare=False)
    label: str = ''

    def __post_init__(self):
        if not (np.isfinite(self.speed) and np.isfinite(self.power)) or self.speed < 0 or self.power < 0:
            raise ConfigError(f'ParetoPoint needs finite non-negative speed/power, got {self.speed}/{self.power}')

    def to_dict(self) -> Dict[str, Any]:
        return {'speed': self.speed, 'power': self.power, **self.params, 'label': self.label}


@dataclass(frozen=True)
class RobustnessRow:
    delta: float
    speed_nominal: float
    speed_perturbed: float

    @property
    def speed_reduction(self) -> float:
        """Fraction of the nominal speed lost; nan when the nominal gait does not move."""
        if self.speed_nominal == 0:
            return float('nan')
        return (self.speed_nominal - self.speed_perturbed) / self.speed_nominal

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), 'speed_reduction': self.speed_reduction}


@dataclass(frozen=True)
class TimingSummary:
    """Wall time and iteration counts of the horizon optimizations of one MPC run."""

    environment: str
    horizon: int
    dt: float
    integrator: str
    max_iterations: int
    duration: float
    seconds: Tuple[float, ...]
    iterations: Tuple[int, ...]
    not_converged: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'seconds', tuple(float(s) for s in self.seconds))
        object.__setattr__(self, 'iterations', tuple(int(i) for i in self.iterations))
        if not self.seconds:
            raise ConfigError('TimingSummary needs at least one optimization')
        if len(self.iterations) != len(self.seconds):
            raise ConfigError(f'{len(self.seconds)} timings but {len(self.iterations)} iteration counts')

    @property
    def n_plans(self) -> int:
        return len(self.seconds)

    def to_dict(self) -> Dict[str, Any]:
        seconds = np.array(self.seconds)
        return {
            'environment': self.environment,
            'horizon': self.horizon,
            'dt': self.dt,
            'integrator': self.integrator,
            'max_iterations': self.max_iterations,
            'n_plans': self.n_plans,
            'duration': self.duration,
            'mean': float(seconds.mean()),
            'std': float(seconds.std()),
            'minimum': float(seconds.min()),
            'maximum': float(seconds.max()),
            'mean_iterations': float(np.mean(self.iterations)),
            'not_converged': self.not_converged,
        }
