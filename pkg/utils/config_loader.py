"""utils/config_loader.py: YAML experiment configuration with strict keys."""

import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from baseline.grid_search import GridSpec
from baseline.serpenoid import SerpenoidParams
from environments import ENVIRONMENTS, build_environment
from environments.base_environment import BaseEnvironment
from models.cost_spec import CostSpec, disc_corridor, obstacles_from_dicts
from models.exceptions import ConfigError
from models.snake import SnakeParams
from optimization.ilqr import ILQRConfig
from optimization.mpc import MPCConfig
from utils.main_config import (
    DEFAULT_DURATION,
    DEFAULT_ENVIRONMENT,
    DEFAULT_GOAL_DIRECTION,
    LOCOMOTION_ENVIRONMENTS,
    MEASURE_WINDOW,
    OUTPUT_DIR,
    OUTPUT_DIR_ENV_VAR,
    POWER_MODES,
    ROBUSTNESS_DELTAS,
    SPEED_REFERENCES,
)

logger = logging.getLogger(__name__)

SECTIONS = (
    'snake',
    'environment',
    'environments',
    'cost',
    'cost_sweep',
    'ilqr',
    'mpc',
    'simulate',
    'grid',
    'analysis',
    'robustness',
    'duration',
    'output_dir',
    'run_environments',
)
COST_KEYS = [f.name for f in fields(CostSpec)] + ['corridor']
CORRIDOR_KEYS = ('x_start', 'x_end', 'clearance', 'radius', 'spacing', 'center_y')


# --- Section records ---


@dataclass(frozen=True)
class SimulateConfig:
    """Open-loop rollout: zero torques or a serpenoid gait tracked by PD."""

    controller: str = 'zero'
    serpenoid: Optional[SerpenoidParams] = None

    def __post_init__(self):
        if self.controller not in ('zero', 'serpenoid'):
            raise ConfigError(f'simulate.controller must be "zero" or "serpenoid", got {self.controller!r}')
        if self.controller == 'serpenoid' and self.serpenoid is None:
            raise ConfigError('simulate.serpenoid parameters are required for the serpenoid controller')

    def to_dict(self):
        return {'controller': self.controller, 'serpenoid': self.serpenoid.to_dict() if self.serpenoid else None}


@dataclass(frozen=True)
class AnalysisConfig:
    window: Tuple[float, float] = MEASURE_WINDOW
    goal_direction: Tuple[float, float] = DEFAULT_GOAL_DIRECTION
    power_mode: str = 'absolute'
    speed_reference: str = 'head'

    def __post_init__(self):
        object.__setattr__(self, 'window', tuple(float(w) for w in self.window))
        object.__setattr__(self, 'goal_direction', tuple(float(g) for g in self.goal_direction))
        if len(self.window) != 2 or not self.window[1] > self.window[0] >= 0:
            raise ConfigError(f'analysis.window must be [start, end] with 0 <= start < end, got {self.window}')
        if self.power_mode not in POWER_MODES:
            raise ConfigError(f'analysis.power_mode must be one of {POWER_MODES}, got {self.power_mode!r}')
        if self.speed_reference not in SPEED_REFERENCES:
            raise ConfigError(f'analysis.speed_reference must be one of {SPEED_REFERENCES}')

    def to_dict(self):
        return {
            'window': list(self.window),
            'goal_direction': list(self.goal_direction),
            'power_mode': self.power_mode,
            'speed_reference': self.speed_reference,
        }


@dataclass(frozen=True)
class RobustnessConfig:
    environment: str = 'viscous'
    coefficient: str = 'c_t'
    deltas: Tuple[float, ...] = ROBUSTNESS_DELTAS

    def to_dict(self):
        return {'environment': self.environment, 'coefficient': self.coefficient, 'deltas': list(self.deltas)}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved experiment description; every command reads only this."""

    snake: SnakeParams = field(default_factory=SnakeParams)
    environment: str = DEFAULT_ENVIRONMENT
    environments: Dict[str, BaseEnvironment] = field(
        default_factory=lambda: {name: cls() for name, cls in ENVIRONMENTS.items()}
    )
    cost: CostSpec = field(default_factory=CostSpec)
    cost_sweep: Tuple[CostSpec, ...] = ()
    mpc: MPCConfig = field(default_factory=MPCConfig)
    simulate: SimulateConfig = field(default_factory=SimulateConfig)
    grid: Optional[GridSpec] = None
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    robustness: RobustnessConfig = field(default_factory=RobustnessConfig)
    duration: float = DEFAULT_DURATION
    output_dir: str = OUTPUT_DIR
    run_environments: Tuple[str, ...] = LOCOMOTION_ENVIRONMENTS

    @property
    def steps(self) -> int:
        return int(round(self.duration / self.snake.dt))

    @property
    def env(self) -> BaseEnvironment:
        return self.environments[self.environment]

    def environment_named(self, name: str) -> BaseEnvironment:
        try:
            return self.environments[name]
        except KeyError:
            raise ConfigError(f'Unknown environment {name!r}; expected one of {sorted(self.environments)}')

    def cost_specs(self) -> List[CostSpec]:
        """The cost sweep when configured, the single cost otherwise."""
        return list(self.cost_sweep) or [self.cost]

    def with_overrides(self, environment: Optional[str] = None, output_dir: Optional[str] = None) -> 'ExperimentConfig':
        changes: Dict[str, Any] = {}
        if environment is not None:
            self.environment_named(environment)
            changes['environment'] = environment
            changes['run_environments'] = (environment,)
        if output_dir is not None:
            changes['output_dir'] = str(output_dir)
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        mpc = self.mpc.to_dict()
        mpc.pop('total_steps')
        if self.mpc.eval_env is not None:
            mpc['eval_env'] = self.mpc.eval_env.kind
        return {
            'snake': self.snake.to_dict(),
            'environment': self.environment,
            'environments': {name: _coefficients(env) for name, env in self.environments.items()},
            'cost': self.cost.to_dict(),
            'cost_sweep': [spec.to_dict() for spec in self.cost_sweep],
            'ilqr': mpc.pop('ilqr'),
            'mpc': mpc,
            'simulate': self.simulate.to_dict(),
            'grid': self.grid.to_dict() if self.grid else None,
            'analysis': self.analysis.to_dict(),
            'robustness': self.robustness.to_dict(),
            'duration': self.duration,
            'output_dir': self.output_dir,
            'run_environments': list(self.run_environments),
        }


# --- Parsing helpers ---


def _coefficients(env: BaseEnvironment) -> Dict[str, Any]:
    data = env.to_dict()
    data.pop('kind')
    return data


def _check_keys(data: Any, allowed, path: str) -> Dict[str, Any]:
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f'{path} must be a mapping, got {type(data).__name__}')
    unknown = sorted(set(data) - set(allowed))
    if unknown:
        raise ConfigError(f'Unknown key(s) in config: {", ".join(f"{path}.{k}" if path else k for k in unknown)}')
    return dict(data)


def _field_names(cls) -> List[str]:
    return [f.name for f in fields(cls)]


def _build(cls, data: Any, path: str, **extra):
    values = _check_keys(data, _field_names(cls), path)
    values.update(extra)
    try:
        return cls(**values)
    except (TypeError, ValueError) as e:
        raise ConfigError(f'{path}: {e}') from e


def _parse_cost(data: Any, path: str) -> CostSpec:
    values = _check_keys(data, COST_KEYS, path)
    obstacles = list(obstacles_from_dicts(values.pop('obstacles', None) or []))
    corridor = values.pop('corridor', None)
    if corridor is not None:
        corridor = _check_keys(corridor, CORRIDOR_KEYS, path + '.corridor')
        obstacles.extend(disc_corridor(**corridor))
    return _build(CostSpec, values, path, obstacles=tuple(obstacles))


def _sweep_entry(base: Any, item: Any, path: str) -> Dict[str, Any]:
    """A cost sweep entry only lists what differs from the cost section."""
    return {**_check_keys(base, COST_KEYS, 'cost'), **_check_keys(item, COST_KEYS, path)}


def _parse_environments(data: Any) -> Dict[str, BaseEnvironment]:
    values = _check_keys(data, ENVIRONMENTS, 'environments')
    envs = {}
    for name in ENVIRONMENTS:
        coeffs = _check_keys(values.get(name), _field_names(ENVIRONMENTS[name]), f'environments.{name}')
        envs[name] = build_environment(name, **coeffs)
    return envs


def _parse_ilqr(data: Any) -> ILQRConfig:
    values = _check_keys(data, _field_names(ILQRConfig), 'ilqr')
    if 'line_search_alphas' in values:
        values['line_search_alphas'] = tuple(values['line_search_alphas'])
    try:
        return ILQRConfig(**values)
    except (TypeError, ValueError) as e:
        raise ConfigError(f'ilqr: {e}') from e


def _parse_mpc(data: Any, ilqr: ILQRConfig, total_steps: int, envs: Dict[str, BaseEnvironment]) -> MPCConfig:
    values = _check_keys(data, ('apply_steps', 'eval_integrator', 'eval_env', 'seed_amplitude', 'show_progress'), 'mpc')
    eval_env = values.pop('eval_env', None)
    if eval_env is not None:
        if eval_env not in envs:
            raise ConfigError(f'mpc.eval_env must name one of {sorted(envs)}, got {eval_env!r}')
        values['eval_env'] = envs[eval_env]
    try:
        return MPCConfig(ilqr=ilqr, total_steps=total_steps, **values)
    except (TypeError, ValueError) as e:
        raise ConfigError(f'mpc: {e}') from e


def _parse_simulate(data: Any) -> SimulateConfig:
    values = _check_keys(data, ('controller', 'serpenoid'), 'simulate')
    if values.get('serpenoid') is not None:
        values['serpenoid'] = _build(SerpenoidParams, values['serpenoid'], 'simulate.serpenoid')
    return _build(SimulateConfig, values, 'simulate')


def _names(values: Any, allowed, path: str) -> Tuple[str, ...]:
    names = tuple(values)
    bad = [name for name in names if name not in allowed]
    if bad:
        raise ConfigError(f'{path} has unknown environment(s) {bad}')
    return names


def _parse_config(data: Any) -> ExperimentConfig:
    data = _check_keys(data, SECTIONS, '')

    snake = _build(SnakeParams, data.get('snake'), 'snake')
    duration = data.get('duration', DEFAULT_DURATION)
    if isinstance(duration, bool) or not isinstance(duration, (int, float)) or not duration > 0:
        raise ConfigError(f'duration must be a number > 0, got {duration!r}')
    duration = float(duration)
    envs = _parse_environments(data.get('environments'))
    environment = data.get('environment', DEFAULT_ENVIRONMENT)
    if environment not in envs:
        raise ConfigError(f'environment must be one of {sorted(envs)}, got {environment!r}')
    ilqr = _parse_ilqr(data.get('ilqr'))

    robustness = _check_keys(data.get('robustness'), _field_names(RobustnessConfig), 'robustness')
    if 'deltas' in robustness:
        robustness['deltas'] = tuple(float(d) for d in robustness['deltas'])
    robustness = _build(RobustnessConfig, robustness, 'robustness')
    _names([robustness.environment], envs, 'robustness.environment')

    grid = data.get('grid')
    output_dir = data.get('output_dir') or os.getenv(OUTPUT_DIR_ENV_VAR) or OUTPUT_DIR

    return ExperimentConfig(
        snake=snake,
        environment=environment,
        environments=envs,
        cost=_parse_cost(data.get('cost'), 'cost'),
        cost_sweep=tuple(
            _parse_cost(_sweep_entry(data.get('cost'), item, f'cost_sweep[{i}]'), f'cost_sweep[{i}]')
            for i, item in enumerate(data.get('cost_sweep') or [])
        ),
        mpc=_parse_mpc(data.get('mpc'), ilqr, int(round(duration / snake.dt)), envs),
        simulate=_parse_simulate(data.get('simulate')),
        grid=GridSpec.from_dict(grid) if grid is not None else None,
        analysis=_build(AnalysisConfig, data.get('analysis'), 'analysis'),
        robustness=robustness,
        duration=duration,
        output_dir=str(output_dir),
        run_environments=_names(data.get('run_environments', LOCOMOTION_ENVIRONMENTS), envs, 'run_environments'),
    )


# --- Public API ---


def config_from_dict(data: Optional[Dict[str, Any]]) -> ExperimentConfig:
    """Validated experiment config; malformed values of any type surface as ConfigError."""
    try:
        return _parse_config(data)
    except ConfigError:
        raise
    except (TypeError, ValueError, AttributeError) as e:
        raise ConfigError(f'Malformed config value: {e}') from e


def load_config(path: Optional[Union[str, Path]] = None) -> ExperimentConfig:
    """Read a YAML config; without a path every section takes its default."""
    if path is None:
        return config_from_dict({})
    path = Path(path)
    if not path.exists():
        raise ConfigError(f'Config file not found: {path}')
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ConfigError(f'Invalid YAML in {path}: {e}') from e
    logger.debug('Loaded config from %s', path)
    return config_from_dict(data)


def config_header(config: ExperimentConfig) -> str:
    """Resolved config as '#'-prefixed YAML lines, for embedding in data files."""
    text = yaml.safe_dump(config.to_dict(), sort_keys=False, default_flow_style=None)
    return ''.join(f'# {line}\n' for line in text.splitlines())
