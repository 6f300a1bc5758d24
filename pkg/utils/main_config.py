"""utils/main_config.py: Defaults and paths for the snake gait toolkit."""

import math
import os

# Get the folder of the project
PROJECT_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

LOGGING_CONF = os.path.join(PROJECT_ROOT, 'logging.conf')
LOG_DIR = os.path.join(PROJECT_ROOT, 'logs')
TEMPLATES_DIR = os.path.join(PROJECT_ROOT, 'templates')
OUTPUT_DIR = os.path.join(PROJECT_ROOT, 'data', 'output')

# Environment variables
THREADS_ENV_VAR = 'SNAKE_GAIT_THREADS'
OUTPUT_DIR_ENV_VAR = 'SNAKE_GAIT_OUTPUT_DIR'

# Experiment protocol: 6 s runs from rest, the first 2 s are ramp-up
DEFAULT_DURATION = 6.0
MEASURE_WINDOW = (2.0, 6.0)
DEFAULT_GOAL_DIRECTION = (-1.0, 0.0)

POWER_MODES = ('absolute', 'signed')
SPEED_REFERENCES = ('head', 'com')

ENVIRONMENT_NAMES = ('box', 'dry', 'viscous', 'fluid')
DEFAULT_ENVIRONMENT = 'viscous'
# Environments the locomotion experiments compare
LOCOMOTION_ENVIRONMENTS = ('dry', 'viscous', 'fluid')

# Serpenoid / PD grid: {min, max, interval}; amplitude and phase offset in radians
GRID_DEFAULT = {
    'frequency': {'min': 0.5, 'max': 10.0, 'interval': 0.25},
    'amplitude': {'min': 0.1 * math.pi, 'max': 1.0 * math.pi, 'interval': 0.1 * math.pi},
    'phase_offset': {'min': 0.5 * math.pi, 'max': 4.0 * math.pi, 'interval': 0.1 * math.pi},
    'kp': {'min': 0.1, 'max': 3.0, 'interval': 0.1},
    'kd': {'min': 0.05, 'max': 0.2, 'interval': 0.01},
}

ROBUSTNESS_DELTAS = (0.0, 0.05, 0.25)

# Number of significant digits written to data files
FLOAT_FORMAT = '%.17g'

BENCH_REPORT_TEMPLATE = 'bench_report'
BENCH_REPORT_VERSION = 'v0'
