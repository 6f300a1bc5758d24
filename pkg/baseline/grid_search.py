"""baseline/grid_search.py: Exhaustive search over serpenoid and PD parameters."""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from analysis.metrics import gait_metrics
from environments.base_environment import BaseEnvironment
from models.exceptions import ConfigError, NumericalFailure
from models.reports import ParetoPoint
from models.snake import SnakeParams
from utils.main_config import DEFAULT_DURATION, DEFAULT_GOAL_DIRECTION, GRID_DEFAULT, MEASURE_WINDOW
from .serpenoid import SerpenoidParams, rollout_serpenoid

logger = logging.getLogger(__name__)

# Row-major enumeration order of the grid
GRID_AXES = ('frequency', 'amplitude', 'phase_offset', 'kp', 'kd')


@dataclass(frozen=True)
class ParamRange:
    min: float
    max: float
    interval: float

    def __post_init__(self):
        if not self.interval > 0:
            raise ConfigError(f'interval must be > 0, got {self.interval}')
        if self.min > self.max:
            raise ConfigError(f'min ({self.min}) must not exceed max ({self.max})')

    def values(self) -> np.ndarray:
        """min, min + interval, ... up to max inclusive (tolerant to rounding of the step count)."""
        count = int(np.floor((self.max - self.min) / self.interval + 1e-9)) + 1
        return self.min + self.interval * np.arange(count)

    def to_dict(self) -> Dict[str, float]:
        return {'min': self.min, 'max': self.max, 'interval': self.interval}


def _default_range(name: str) -> ParamRange:
    return ParamRange(**GRID_DEFAULT[name])


@dataclass(frozen=True)
class GridSpec:
    frequency: ParamRange = field(default_factory=partial(_default_range, 'frequency'))
    amplitude: ParamRange = field(default_factory=partial(_default_range, 'amplitude'))
    phase_offset: ParamRange = field(default_factory=partial(_default_range, 'phase_offset'))
    kp: ParamRange = field(default_factory=partial(_default_range, 'kp'))
    kd: ParamRange = field(default_factory=partial(_default_range, 'kd'))
    bias: float = 0.0

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(len(getattr(self, axis).values()) for axis in GRID_AXES)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    def cells(self) -> Iterator[SerpenoidParams]:
        """Every grid cell, row-major over (frequency, amplitude, phase_offset, kp, kd)."""
        for f, a, b, kp, kd in itertools.product(*(getattr(self, axis).values() for axis in GRID_AXES)):
            yield SerpenoidParams(
                amplitude=float(a),
                frequency=float(f),
                phase_offset=float(b),
                bias=self.bias,
                kp=float(kp),
                kd=float(kd),
            )

    def to_dict(self) -> Dict[str, Any]:
        return {**{axis: getattr(self, axis).to_dict() for axis in GRID_AXES}, 'bias': self.bias}

    @staticmethod
    def from_dict(data: Dict[str, Any]) -> 'GridSpec':
        data = dict(data)
        unknown = set(data) - set(GRID_AXES) - {'bias'}
        if unknown:
            raise ConfigError(f'Unknown grid key(s): {sorted(unknown)}')
        ranges = {}
        for axis in GRID_AXES:
            if axis in data:
                spec = data[axis]
                if not isinstance(spec, dict):
                    # a bare number fixes the axis
                    spec = {'min': spec, 'max': spec, 'interval': 1.0}
                bad = set(spec) - {'min', 'max', 'interval'}
                if bad:
                    raise ConfigError(f'Unknown key(s) {sorted(bad)} in grid.{axis}')
                ranges[axis] = ParamRange(**{**GRID_DEFAULT[axis], **spec})
        return GridSpec(**ranges, bias=float(data.get('bias', 0.0)))


@dataclass
class GridSearchResult:
    points: List[ParetoPoint]
    failed: int = 0
    non_positive: int = 0

    @property
    def evaluated(self) -> int:
        return len(self.points) + self.failed + self.non_positive


def evaluate_cell(
    cell: SerpenoidParams,
    env: BaseEnvironment,
    snake_params: SnakeParams,
    duration: float,
    window: Tuple[float, float],
    goal_direction: Tuple[float, float],
    power_mode: str,
) -> Tuple[str, Optional[ParetoPoint]]:
    """('ok', point), ('failed', None) for a diverged rollout, or ('non_positive', None) for a gait moving away."""
    try:
        traj = rollout_serpenoid(cell, env, snake_params, duration)
    except NumericalFailure as e:
        logger.debug('Grid cell %s failed: %s', cell, e)
        return 'failed', None
    metrics = gait_metrics(traj, window[0], window[1], goal_direction, power_mode=power_mode)
    if not metrics.mean_speed > 0:
        return 'non_positive', None
    return 'ok', ParetoPoint(
        speed=metrics.mean_speed,
        power=metrics.mean_power,
        params=cell.to_dict(),
        label=f'serpenoid-{env.kind}',
    )


def grid_search(
    grid: GridSpec,
    env: BaseEnvironment,
    snake_params: SnakeParams,
    duration: float = DEFAULT_DURATION,
    window: Tuple[float, float] = MEASURE_WINDOW,
    goal_direction: Tuple[float, float] = DEFAULT_GOAL_DIRECTION,
    power_mode: str = 'absolute',
    workers: int = 1,
    show_progress: bool = False,
) -> GridSearchResult:
    """Evaluate every cell; results keep the row-major cell order whatever the worker count."""
    evaluate = partial(
        evaluate_cell,
        env=env,
        snake_params=snake_params,
        duration=duration,
        window=window,
        goal_direction=goal_direction,
        power_mode=power_mode,
    )
    logger.info('Grid search in %s: %d cells, %d worker(s)', env.kind, grid.size, workers)
    progress = partial(tqdm, total=grid.size, desc=f'grid {env.kind}', disable=not show_progress)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunksize = max(1, grid.size // (workers * 16))
            outcomes = list(progress(pool.map(evaluate, grid.cells(), chunksize=chunksize)))
    else:
        outcomes = [evaluate(cell) for cell in progress(grid.cells())]

    result = GridSearchResult(points=[point for status, point in outcomes if status == 'ok'])
    result.failed = sum(status == 'failed' for status, _ in outcomes)
    result.non_positive = sum(status == 'non_positive' for status, _ in outcomes)
    if result.failed:
        logger.warning('Grid search in %s: %d cell(s) diverged', env.kind, result.failed)
    logger.info(
        'Grid search in %s: %d point(s), %d moving away from the goal',
        env.kind,
        len(result.points),
        result.non_positive,
    )
    return result
