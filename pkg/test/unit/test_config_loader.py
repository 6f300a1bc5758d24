"""Unit tests for utils/config_loader.py."""

from pathlib import Path

import pytest
import yaml

from environments import Fluid, SmoothDry, Viscous
from models.cost_spec import CostSpec
from models.exceptions import ConfigError
from utils.config_loader import ExperimentConfig, config_from_dict, config_header, load_config
from utils.main_config import OUTPUT_DIR, OUTPUT_DIR_ENV_VAR, PROJECT_ROOT

CONFIG_DIR = Path(PROJECT_ROOT) / 'configs'


@pytest.fixture(autouse=True)
def no_output_override(monkeypatch):
    monkeypatch.delenv(OUTPUT_DIR_ENV_VAR, raising=False)


def test_empty_config_takes_every_default():
    config = config_from_dict({})
    assert config == ExperimentConfig()
    assert config == load_config(None)
    assert config.steps == 600
    assert config.output_dir == OUTPUT_DIR
    assert isinstance(config.env, Viscous)
    assert config.cost_specs() == [CostSpec()]


@pytest.mark.parametrize(
    'data, path',
    [
        ({'snake': {'n_link': 5}}, 'snake.n_link'),
        ({'mpc': {'horizon': 5}}, 'mpc.horizon'),
        ({'environments': {'dry': {'mu': 0.3}}}, 'environments.dry.mu'),
        ({'cost': {'corridor': {'x_start': 0.0, 'x_end': 1.0, 'width': 0.2}}}, 'cost.corridor.width'),
        ({'cost_sweep': [{'gamma': 1.0}]}, 'cost_sweep[0].gamma'),
        ({'speed': 1.0}, 'speed'),
    ],
)
def test_unknown_keys_name_their_dotted_path(data, path):
    with pytest.raises(ConfigError, match=path.replace('[', r'\[').replace(']', r'\]')):
        config_from_dict(data)


@pytest.mark.parametrize(
    'data',
    [
        {'duration': 0.0},
        {'environment': 'sand'},
        {'run_environments': ['dry', 'honey']},
        {'ilqr': {'horizon': 0}},
        {'mpc': {'apply_steps': 30}},
        {'mpc': {'eval_env': 'sand'}},
        {'snake': {'n_links': 1}},
        {'analysis': {'window': [4.0, 2.0]}},
        {'analysis': {'power_mode': 'peak'}},
        {'simulate': {'controller': 'serpenoid'}},
        {'robustness': {'environment': 'sand'}},
        {'environments': {'fluid': {'density': -1.0}}},
        {'environments': {'dry': {'eps_fraction': 0.0}}},
        {'duration': 'long'},
        {'duration': None},
        {'ilqr': {'horizon': 'ten'}},
        {'mpc': {'seed_amplitude': 'big'}},
        {'snake': {'link_mass': 'heavy'}},
        {'robustness': {'deltas': ['a', 'b']}},
    ],
)
def test_invalid_values_are_config_errors(data):
    with pytest.raises(ConfigError):
        config_from_dict(data)


def test_sections_are_parsed():
    config = config_from_dict(
        {
            'snake': {'n_links': 3, 'dt': 0.02},
            'environment': 'fluid',
            'environments': {'viscous': {'c_t': 2.0}},
            'ilqr': {'horizon': 5, 'line_search_alphas': [1.0, 0.5]},
            'mpc': {'apply_steps': 2, 'eval_env': 'dry', 'seed_amplitude': 0.1},
            'duration': 1.0,
            'simulate': {
                'controller': 'serpenoid',
                'serpenoid': {'amplitude': 0.5, 'frequency': 1.0, 'phase_offset': 1.5},
            },
            'grid': {'frequency': 1.0, 'kp': 1.0},
        }
    )
    assert config.snake.n_links == 3
    assert config.steps == 50
    assert isinstance(config.env, Fluid)
    assert config.environments['viscous'] == Viscous(c_t=2.0)
    assert config.mpc.ilqr.line_search_alphas == (1.0, 0.5)
    assert config.mpc.total_steps == 50
    assert config.mpc.eval_env == SmoothDry()
    assert config.mpc.seed_amplitude == 0.1
    assert config.simulate.serpenoid.frequency == 1.0
    assert config.grid.frequency.values().tolist() == [1.0]


def test_cost_sweep_entries_override_the_base_cost():
    config = config_from_dict(
        {
            'cost': {'goal': [-20.0, 0.0], 'alpha': 2.0, 'beta': 0.01},
            'cost_sweep': [{'beta': 0.1}, {'goal': [-10.0, 0.0]}],
        }
    )
    specs = config.cost_specs()
    assert specs == [
        CostSpec(goal=(-20.0, 0.0), alpha=2.0, beta=0.1),
        CostSpec(goal=(-10.0, 0.0), alpha=2.0, beta=0.01),
    ]


def test_corridor_expands_into_two_disc_walls():
    config = config_from_dict(
        {'cost': {'corridor': {'x_start': -0.4, 'x_end': -1.2, 'clearance': 0.25, 'radius': 0.1, 'spacing': 0.1}}}
    )
    obstacles = config.cost.obstacles
    assert len(obstacles) == 18
    assert sorted({round(o.center[1], 9) for o in obstacles}) == [-0.225, 0.225]
    assert all(o.radius == 0.1 for o in obstacles)
    assert min(o.center[0] for o in obstacles) == pytest.approx(-1.2)
    assert max(o.center[0] for o in obstacles) == pytest.approx(-0.4)


def test_explicit_obstacles_and_corridor_are_combined():
    config = config_from_dict(
        {
            'cost': {
                'obstacles': [{'center': [-3.0, 0.0], 'radius': 0.5}],
                'corridor': {'x_start': 0.0, 'x_end': 0.0},
            }
        }
    )
    assert len(config.cost.obstacles) == 3
    assert config.cost.obstacles[0].center == (-3.0, 0.0)


def test_output_dir_resolution(monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV_VAR, '/tmp/from-env')
    assert config_from_dict({}).output_dir == '/tmp/from-env'
    assert config_from_dict({'output_dir': 'runs/a'}).output_dir == 'runs/a'
    assert config_from_dict({'output_dir': 'runs/a'}).with_overrides(output_dir='runs/b').output_dir == 'runs/b'


def test_environment_override_narrows_the_run():
    config = config_from_dict({}).with_overrides(environment='fluid')
    assert config.environment == 'fluid'
    assert config.run_environments == ('fluid',)
    with pytest.raises(ConfigError):
        config.with_overrides(environment='sand')


def test_to_dict_round_trips():
    config = config_from_dict(
        {
            'snake': {'n_links': 4},
            'environments': {'dry': {'mu_t': 0.5}},
            'cost': {'obstacles': [{'center': [-1.0, 0.3], 'radius': 0.1}]},
            'cost_sweep': [{'beta': 0.1}],
            'mpc': {'eval_env': 'viscous', 'seed_amplitude': 0.0},
            'grid': {'frequency': {'min': 1.0, 'max': 2.0, 'interval': 0.5}},
            'robustness': {'deltas': [0.0, 0.1]},
            'output_dir': 'runs/x',
        }
    )
    assert config_from_dict(config.to_dict()) == config
    assert config_from_dict(yaml.safe_load(yaml.safe_dump(config.to_dict()))) == config


def test_config_header_is_commented_yaml():
    header = config_header(config_from_dict({'duration': 2.0}))
    lines = header.splitlines()
    assert lines and all(line.startswith('# ') for line in lines)
    restored = yaml.safe_load('\n'.join(line[2:] for line in lines))
    assert restored['duration'] == 2.0
    assert restored['snake']['n_links'] == 5


def test_load_config_errors(tmp_path):
    with pytest.raises(ConfigError, match='not found'):
        load_config(tmp_path / 'missing.yaml')
    bad = tmp_path / 'bad.yaml'
    bad.write_text('snake: [unclosed\n')
    with pytest.raises(ConfigError, match='Invalid YAML'):
        load_config(bad)
    scalar = tmp_path / 'scalar.yaml'
    scalar.write_text('42\n')
    with pytest.raises(ConfigError):
        load_config(scalar)


@pytest.mark.parametrize('path', sorted(CONFIG_DIR.glob('*.yaml')), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    config = load_config(path)
    assert config.duration > 0
    assert config.cost_specs()
