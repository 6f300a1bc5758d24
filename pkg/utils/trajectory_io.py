"""utils/trajectory_io.py: Delimited-text persistence of trajectories and result tables."""

import logging
from pathlib import Path
from typing import Dict, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from models.exceptions import ConfigError
from models.snake import Trajectory
from utils.main_config import FLOAT_FORMAT

logger = logging.getLogger(__name__)


def trajectory_columns(n_links: int) -> List[str]:
    return (
        ['t', 'x0', 'y0']
        + [f'q{i}' for i in range(n_links)]
        + ['vx0', 'vy0']
        + [f'dq{i}' for i in range(n_links)]
        + [f'tau{j}' for j in range(1, n_links)]
    )


def trajectory_frame(traj: Trajectory) -> pd.DataFrame:
    """One row per state; the last row carries no torque (NaN)."""
    n = traj.n_links
    torques = np.full((len(traj.states), n - 1), np.nan)
    torques[:-1] = traj.controls
    data = np.column_stack([traj.times, traj.states, torques])
    return pd.DataFrame(data, columns=trajectory_columns(n))


def write_table(df: pd.DataFrame, path: Union[str, Path], header: str = '') -> Path:
    """CSV with an optional '#'-prefixed provenance header; floats keep 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', newline='') as f:
        f.write(header)
        df.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    logger.info('Wrote %s (%d rows)', path, len(df))
    return path


def read_table(path: Union[str, Path]) -> pd.DataFrame:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f'File not found: {path}')
    try:
        return pd.read_csv(path, comment='#', float_precision='round_trip')
    except (OSError, UnicodeDecodeError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ConfigError(f'Cannot read table {path}: {e}') from e


def write_trajectory(traj: Trajectory, path: Union[str, Path], header: str = '') -> Path:
    return write_table(trajectory_frame(traj), path, header)


def read_trajectory(path: Union[str, Path]) -> Trajectory:
    df = read_table(path)
    n_torques = sum(col.startswith('tau') for col in df.columns)
    n = n_torques + 1
    if list(df.columns) != trajectory_columns(n):
        raise ConfigError(f'{path} is not a trajectory file (columns {list(df.columns)})')
    times = df['t'].to_numpy()
    if len(times) < 2:
        raise ConfigError(f'{path} holds fewer than two samples')
    states = df[trajectory_columns(n)[1 : 1 + 2 * n + 4]].to_numpy()
    controls = df[[f'tau{j}' for j in range(1, n)]].to_numpy()[:-1]
    return Trajectory(dt=float(times[1] - times[0]), states=states, controls=controls, metadata={'source': str(path)})


def records_frame(records: Sequence, extra: Dict[str, object] = None) -> pd.DataFrame:
    """DataFrame from objects exposing to_dict(); `extra` columns are prepended to every row."""
    extra = extra or {}
    return pd.DataFrame([{**extra, **record.to_dict()} for record in records])


def split_header(path: Union[str, Path]) -> Tuple[str, str]:
    """(header comment block, table body) of a data file."""
    lines = Path(path).read_text().splitlines(keepends=True)
    cut = next((i for i, line in enumerate(lines) if not line.startswith('#')), len(lines))
    return ''.join(lines[:cut]), ''.join(lines[cut:])
