"""main.py: Command-line entry point of the snake gait toolkit."""

import argparse
import logging
import logging.config
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import dotenv
import numpy as np
import pandas as pd

from analysis.metrics import gait_metrics, heading_change, mean_dissipated_power
from analysis.robustness import robustness_experiment
from analysis.spectrum import joint_spectrum
from baseline.grid_search import GridSpec, grid_search
from baseline.pareto import pareto_front
from baseline.serpenoid import rollout_serpenoid
from dynamics.integrators import Integrator
from environments.base_environment import BaseEnvironment
from models.cost_spec import CostSpec
from models.exceptions import ConfigError, NumericalFailure
from models.reports import TimingSummary
from models.snake import Trajectory, straight_state
from optimization.costs import min_clearance
from optimization.ilqr import SnakeTransition, rollout
from optimization.mpc import PlanRecord, run_mpc
from utils.config_loader import ExperimentConfig, config_header, load_config
from utils.main_config import (
    ENVIRONMENT_NAMES,
    LOG_DIR,
    LOGGING_CONF,
    THREADS_ENV_VAR,
)
from utils.report_manager import ReportManager
from utils.trajectory_io import read_trajectory, records_frame, write_table, write_trajectory

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_NUMERICAL_FAILURE = 2


# ===== Shared helpers =====


def goal_direction(cost: CostSpec, config: ExperimentConfig) -> np.ndarray:
    """Unit vector from the start of the head to the goal; the configured direction if they coincide."""
    delta = cost.goal_array - straight_state(config.snake).head_pos
    if np.linalg.norm(delta) > 0:
        return delta / np.linalg.norm(delta)
    return np.asarray(config.analysis.goal_direction)


def metrics_row(
    traj: Trajectory, config: ExperimentConfig, direction: Sequence[float], env: BaseEnvironment
) -> dict:
    """Window metrics of one run; `env` is the environment the trajectory was executed in."""
    window = config.analysis.window
    metrics = gait_metrics(
        traj,
        window[0],
        window[1],
        direction,
        power_mode=config.analysis.power_mode,
        speed_reference=config.analysis.speed_reference,
        params=config.snake,
    )
    return {
        'speed': metrics.mean_speed,
        'power': metrics.mean_power,
        'dissipated_power': mean_dissipated_power(traj, env, config.snake, window[0], window[1]),
        'window_start': metrics.window_start,
        'window_end': metrics.window_end,
    }


def mpc_job(job: Tuple[ExperimentConfig, str, int]) -> Tuple[str, int, Trajectory]:
    """One (environment, cost) MPC run; module level so process pools can pickle it."""
    config, env_name, index = job
    env = config.environment_named(env_name)
    cost = config.cost_specs()[index]
    traj = run_mpc(straight_state(config.snake), env, None, config.snake, cost, config.mpc)
    return env_name, index, traj


def map_jobs(fn, jobs: List, workers: int) -> List:
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


# ===== Commands =====


def cmd_simulate(config: ExperimentConfig, workers: int) -> List[Path]:
    """Open-loop rollout (zero torques or serpenoid PD) in the selected environment."""
    env = config.env
    if config.simulate.controller == 'serpenoid':
        traj = rollout_serpenoid(config.simulate.serpenoid, env, config.snake, config.duration)
    else:
        model = SnakeTransition(env, config.snake, Integrator.RK4)
        controls = np.zeros((config.steps, config.snake.n_joints))
        traj = rollout(model, straight_state(config.snake).to_vector(), controls)
    path = Path(config.output_dir) / f'simulate_{config.simulate.controller}_{env.kind}.csv'
    return [write_trajectory(traj, path, config_header(config))]


def cmd_mpc(config: ExperimentConfig, workers: int) -> List[Path]:
    """MPC gait per (environment, cost) pair; one trajectory file each plus one metrics table."""
    costs = config.cost_specs()
    jobs = [(config, name, i) for name in config.run_environments for i in range(len(costs))]
    header = config_header(config)
    out = Path(config.output_dir)
    written, rows = [], []
    for env_name, index, traj in map_jobs(mpc_job, jobs, workers):
        cost = costs[index]
        suffix = f'_{index}' if len(costs) > 1 else ''
        executed_in = config.mpc.eval_env or config.environment_named(env_name)
        written.append(write_trajectory(traj, out / f'mpc_{env_name}{suffix}.csv', header))
        row = {
            'environment': env_name,
            'cost_index': index,
            'alpha': cost.alpha,
            'beta': cost.beta,
            'goal_x': cost.goal[0],
            'goal_y': cost.goal[1],
            **metrics_row(traj, config, goal_direction(cost, config), executed_in),
            'heading_change': heading_change(traj, *config.analysis.window),
            'min_clearance': min_clearance(traj, config.snake, cost.obstacles),
        }
        logger.info('MPC %s[%d]: speed %.4f m/s, power %.4f W', env_name, index, row['speed'], row['power'])
        rows.append(row)
    written.append(write_table(pd.DataFrame(rows), out / 'mpc_metrics.csv', header))
    return written


def cmd_gridsearch(config: ExperimentConfig, workers: int) -> List[Path]:
    """Serpenoid grid per environment; all points and the Pareto front."""
    grid = config.grid or GridSpec()
    header = config_header(config)
    out = Path(config.output_dir)
    written = []
    for env_name in config.run_environments:
        result = grid_search(
            grid,
            config.environment_named(env_name),
            config.snake,
            duration=config.duration,
            window=config.analysis.window,
            goal_direction=goal_direction(config.cost, config),
            power_mode=config.analysis.power_mode,
            workers=workers,
            show_progress=workers > 1,
        )
        front = pareto_front(result.points)
        logger.info(
            'Grid %s: %d points, %d failed, %d non-positive, front of %d',
            env_name,
            len(result.points),
            result.failed,
            result.non_positive,
            len(front),
        )
        extra = {'environment': env_name}
        written.append(write_table(records_frame(result.points, extra), out / f'grid_{env_name}_points.csv', header))
        written.append(write_table(records_frame(front, extra), out / f'grid_{env_name}_front.csv', header))
    return written


def cmd_analyze(config: ExperimentConfig, trajectory_file: str) -> List[Path]:
    """Metrics and per-joint spectrum of a stored trajectory."""
    traj = read_trajectory(trajectory_file)
    window = config.analysis.window
    spectrum = joint_spectrum(traj, window[0], window[1])
    metrics = pd.DataFrame([metrics_row(traj, config, goal_direction(config.cost, config), config.env)])
    spectrum_df = pd.DataFrame(spectrum.to_rows())
    print(metrics.to_markdown(index=False))
    print()
    print(spectrum_df.to_markdown(index=False))

    out = Path(config.output_dir)
    stem = Path(trajectory_file).stem
    header = config_header(config)
    return [
        write_table(metrics, out / f'{stem}_metrics.csv', header),
        write_table(spectrum_df, out / f'{stem}_spectrum.csv', header),
    ]


def cmd_bench(config: ExperimentConfig, workers: int) -> List[Path]:
    """Wall time of every horizon optimization over a full MPC run in the selected environment."""
    records: List[PlanRecord] = []
    env = config.env
    run_mpc(straight_state(config.snake), env, None, config.snake, config.cost, config.mpc, records.append)
    summary = TimingSummary(
        environment=env.kind,
        horizon=config.mpc.ilqr.horizon,
        dt=config.snake.dt,
        integrator=config.mpc.ilqr.integrator.value,
        max_iterations=config.mpc.ilqr.max_iterations,
        duration=config.duration,
        seconds=[r.seconds for r in records],
        iterations=[r.iterations for r in records],
        not_converged=sum(not r.converged for r in records),
    )
    reports = ReportManager()
    report = reports.bench_report(summary)
    print(report)

    out = Path(config.output_dir)
    timings = pd.DataFrame([vars(r) for r in records])
    return [
        reports.write(report, out / f'bench_{env.kind}.md'),
        write_table(timings, out / f'bench_{env.kind}_timings.csv', config_header(config)),
    ]


def cmd_robustness(config: ExperimentConfig, workers: int) -> List[Path]:
    """Speed reduction when the planner's coefficient is off by each configured fraction."""
    settings = config.robustness
    rows = robustness_experiment(
        config.environment_named(settings.environment),
        settings.deltas,
        config.cost,
        config.snake,
        config.mpc,
        coefficient=settings.coefficient,
        window=config.analysis.window,
    )
    df = records_frame(rows, {'environment': settings.environment, 'coefficient': settings.coefficient})
    print(df.to_markdown(index=False))
    return [write_table(df, Path(config.output_dir) / 'robustness.csv', config_header(config))]


COMMANDS = {
    'simulate': cmd_simulate,
    'mpc': cmd_mpc,
    'gridsearch': cmd_gridsearch,
    'bench': cmd_bench,
    'robustness': cmd_robustness,
}


# ===== CLI plumbing =====


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description='Snake robot gait synthesis and evaluation')
    sub = parser.add_subparsers(dest='command', required=True)
    for name in ('simulate', 'mpc', 'gridsearch', 'analyze', 'bench', 'robustness'):
        p = sub.add_parser(name)
        if name == 'analyze':
            p.add_argument('trajectory', help='Trajectory CSV written by simulate or mpc')
        p.add_argument('--config', default=None, help='YAML experiment config (defaults when omitted)')
        p.add_argument('--output', default=None, help='Output directory (overrides the config)')
        p.add_argument('--env', choices=ENVIRONMENT_NAMES, default=None, help='Environment (overrides the config)')
        p.add_argument('--threads', type=int, default=None, help=f'Worker count (default: ${THREADS_ENV_VAR} or 1)')
    return parser


def setup_logging():
    # ===== Logging =====
    if Path(LOGGING_CONF).exists():
        Path(LOG_DIR).mkdir(parents=True, exist_ok=True)
        logging.config.fileConfig(
            LOGGING_CONF, defaults={'logdir': Path(LOG_DIR).as_posix()}, disable_existing_loggers=False
        )
    else:
        logging.basicConfig(level=logging.INFO, format='%(asctime)s [%(levelname)s] %(name)s: %(message)s')


def resolve_threads(threads: Optional[int]) -> int:
    if threads is None:
        value = os.getenv(THREADS_ENV_VAR, '1')
        try:
            threads = int(value)
        except ValueError:
            raise ConfigError(f'{THREADS_ENV_VAR} must be an integer, got {value!r}')
    if threads < 1:
        raise ConfigError(f'Thread count must be >= 1, got {threads}')
    return threads


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging()

    # ===== Environment Variables =====
    dotenv.load_dotenv()

    try:
        config = load_config(args.config).with_overrides(environment=args.env, output_dir=args.output)
        workers = resolve_threads(args.threads)
        logger.info('Running %s (output in %s)', args.command, config.output_dir)
        if args.command == 'analyze':
            written = cmd_analyze(config, args.trajectory)
        else:
            written = COMMANDS[args.command](config, workers)
    except ConfigError as e:
        logger.error('Configuration error: %s', e)
        return EXIT_CONFIG_ERROR
    except FileNotFoundError as e:
        logger.error('Missing file: %s', e)
        return EXIT_CONFIG_ERROR
    except NumericalFailure as e:
        logger.exception('Numerical failure: %s', e)
        return EXIT_NUMERICAL_FAILURE
    logger.info('%s finished: %d file(s) written', args.command, len(written))
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
