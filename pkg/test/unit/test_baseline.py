"""Unit tests for the serpenoid baseline: references, PD tracking, grid enumeration and the Pareto front."""

import numpy as np
import pytest

from baseline.grid_search import GridSearchResult, GridSpec, ParamRange, evaluate_cell, grid_search
from baseline.pareto import dominates, interpolate_power, pareto_front
from baseline.serpenoid import SerpenoidParams, pd_torque, rollout_serpenoid, serpenoid_reference
from environments import Viscous
from models.exceptions import ConfigError
from models.reports import ParetoPoint
from models.snake import SnakeParams, SnakeState, straight_state

PARAMS = SnakeParams()
GAIT = SerpenoidParams(amplitude=0.5, frequency=1.0, phase_offset=np.pi / 2)


# --- Serpenoid reference and PD torque ---


def test_serpenoid_reference_examples():
    assert serpenoid_reference(0.0, 1, GAIT) == pytest.approx(0.0)
    assert serpenoid_reference(0.0, 2, GAIT) == pytest.approx(0.5)
    assert serpenoid_reference(0.25, 1, GAIT) == pytest.approx(0.5)
    biased = SerpenoidParams(amplitude=0.5, frequency=1.0, phase_offset=np.pi / 2, bias=0.1)
    assert serpenoid_reference(0.0, 1, biased) == pytest.approx(0.1)


def test_serpenoid_reference_is_periodic():
    gait = SerpenoidParams(amplitude=0.3, frequency=2.5, phase_offset=1.1)
    t = np.linspace(0.0, 1.0, 17)
    for joint in range(1, 5):
        np.testing.assert_allclose(
            serpenoid_reference(t + gait.period, joint, gait), serpenoid_reference(t, joint, gait), atol=1e-12
        )


def test_pd_torque_tracks_the_reference():
    state = straight_state(PARAMS)
    np.testing.assert_allclose(pd_torque(state, 0.0, GAIT, 1.0), [0.0, 0.5, 0.0, -0.5], atol=1e-12)
    stiff = SerpenoidParams(amplitude=0.5, frequency=1.0, phase_offset=np.pi / 2, kp=10.0)
    np.testing.assert_allclose(pd_torque(state, 0.0, stiff, 1.0), [0.0, 1.0, 0.0, -1.0], atol=1e-12)


def test_pd_torque_damps_joint_rates():
    state = SnakeState(head_pos=[0, 0], angles=np.zeros(5), head_vel=[0, 0], angle_rates=[5.0, 1.0, -2.0, 0.0, 3.0])
    still = SerpenoidParams(amplitude=0.0, frequency=1.0, phase_offset=0.0, kp=1.0, kd=0.1)
    # the head link's absolute rate is not a joint rate
    np.testing.assert_allclose(pd_torque(state, 0.3, still, 1.0), [-0.1, 0.2, 0.0, -0.3])


def test_serpenoid_params_validation():
    with pytest.raises(ConfigError):
        SerpenoidParams(amplitude=0.5, frequency=0.0, phase_offset=1.0)
    with pytest.raises(ConfigError):
        SerpenoidParams(amplitude=0.5, frequency=1.0, phase_offset=1.0, kd=-0.1)
    assert GAIT.period == pytest.approx(1.0)


def test_rollout_serpenoid_shapes():
    traj = rollout_serpenoid(GAIT, Viscous(), PARAMS, 0.1)
    assert traj.states.shape == (11, 14)
    assert traj.controls.shape == (10, 4)
    assert np.all(np.isfinite(traj.states))
    assert np.all(np.abs(traj.controls) <= PARAMS.torque_limit)
    np.testing.assert_array_equal(traj.states[0], straight_state(PARAMS).to_vector())
    assert traj.metadata['environment'] == 'viscous'


# --- Grid ---


def test_param_range_values():
    np.testing.assert_allclose(ParamRange(0.5, 1.0, 0.25).values(), [0.5, 0.75, 1.0])
    np.testing.assert_allclose(ParamRange(0.1, 3.0, 0.1).values()[-1], 3.0)
    assert len(ParamRange(0.1, 3.0, 0.1).values()) == 30
    np.testing.assert_array_equal(ParamRange(2.0, 2.0, 1.0).values(), [2.0])
    with pytest.raises(ConfigError):
        ParamRange(0.0, 1.0, 0.0)
    with pytest.raises(ConfigError):
        ParamRange(1.0, 0.0, 0.1)


def test_default_grid_shape():
    grid = GridSpec()
    assert grid.shape == (39, 10, 36, 30, 16)
    assert grid.size == 39 * 10 * 36 * 30 * 16


def test_grid_cells_are_row_major():
    grid = GridSpec.from_dict(
        {
            'frequency': {'min': 1.0, 'max': 2.0, 'interval': 1.0},
            'amplitude': 0.5,
            'phase_offset': {'min': 1.0, 'max': 1.5, 'interval': 0.5},
            'kp': 1.0,
            'kd': 0.1,
        }
    )
    cells = list(grid.cells())
    assert grid.size == len(cells) == 4
    assert [(c.frequency, c.phase_offset) for c in cells] == [(1.0, 1.0), (1.0, 1.5), (2.0, 1.0), (2.0, 1.5)]
    assert all(c.amplitude == 0.5 and c.kp == 1.0 and c.kd == 0.1 and c.bias == 0.0 for c in cells)


def test_grid_from_dict_round_trip_and_errors():
    grid = GridSpec.from_dict({'frequency': {'max': 1.0}, 'bias': 0.2})
    assert grid.frequency == ParamRange(0.5, 1.0, 0.25)
    assert GridSpec.from_dict(grid.to_dict()) == grid
    with pytest.raises(ConfigError):
        GridSpec.from_dict({'speed': 1.0})
    with pytest.raises(ConfigError):
        GridSpec.from_dict({'kp': {'min': 1.0, 'step': 0.1}})


def _single_cell_grid(frequency: float = 1.0) -> GridSpec:
    return GridSpec.from_dict(
        {'frequency': frequency, 'amplitude': 0.5, 'phase_offset': np.pi / 2, 'kp': 1.0, 'kd': 0.1}
    )


def test_evaluate_cell_reports_a_status():
    cell = next(_single_cell_grid().cells())
    status, point = evaluate_cell(cell, Viscous(), PARAMS, 0.3, (0.1, 0.3), (-1.0, 0.0), 'absolute')
    assert status in ('ok', 'non_positive')
    if status == 'ok':
        assert point.speed > 0 and point.label == 'serpenoid-viscous'
        assert point.params['frequency'] == 1.0
    else:
        assert point is None


def test_grid_search_counts_every_cell_and_is_worker_independent():
    grid = GridSpec.from_dict(
        {
            'frequency': {'min': 1.0, 'max': 2.0, 'interval': 1.0},
            'amplitude': 0.5,
            'phase_offset': 1.5,
            'kp': 1.0,
            'kd': 0.1,
        }
    )
    serial = grid_search(grid, Viscous(), PARAMS, duration=0.2, window=(0.1, 0.2), workers=1)
    parallel = grid_search(grid, Viscous(), PARAMS, duration=0.2, window=(0.1, 0.2), workers=2)
    assert isinstance(serial, GridSearchResult)
    assert serial.evaluated == parallel.evaluated == 2
    assert serial.points == parallel.points
    assert serial.non_positive == parallel.non_positive


# --- Pareto front ---


def _points(pairs):
    return [ParetoPoint(speed=s, power=p) for s, p in pairs]


def test_dominates():
    a, b, c = _points([(2.0, 1.0), (1.0, 2.0), (2.0, 1.0)])
    assert dominates(a, b)
    assert not dominates(b, a)
    assert not dominates(a, c) and not dominates(c, a)


def test_pareto_front_examples():
    points = _points([(1.0, 1.0), (2.0, 2.0), (1.5, 3.0), (2.0, 2.5), (0.5, 0.5)])
    front = pareto_front(points)
    assert [(p.speed, p.power) for p in front] == [(0.5, 0.5), (1.0, 1.0), (2.0, 2.0)]
    assert pareto_front([]) == []


def test_pareto_front_matches_pairwise_definition():
    rng = np.random.default_rng(0)
    points = _points(rng.uniform(0.0, 1.0, size=(300, 2)))
    front = pareto_front(points)
    oracle = sorted((p for p in points if not any(dominates(q, p) for q in points)), key=lambda p: p.speed)
    assert front == oracle
    assert pareto_front(front) == front
    assert all(b.speed > a.speed and b.power > a.power for a, b in zip(front, front[1:]))


def test_pareto_front_keeps_first_duplicate():
    first = ParetoPoint(speed=1.0, power=1.0, label='first')
    second = ParetoPoint(speed=1.0, power=1.0, label='second')
    assert [p.label for p in pareto_front([first, second])] == ['first']


def test_interpolate_power():
    front = _points([(1.0, 1.0), (2.0, 3.0)])
    assert interpolate_power(front, 1.5) == pytest.approx(2.0)
    assert interpolate_power(front, 0.5) == pytest.approx(1.0)
    assert interpolate_power(front, 2.0) == pytest.approx(3.0)
    assert interpolate_power(front, 2.5) == float('inf')
    with pytest.raises(ValueError):
        interpolate_power([], 1.0)
