"""analysis/spectrum.py: Dominant DFT component of each joint angle."""

import numpy as np

from models.exceptions import ConfigError
from models.reports import JointSpectrum
from models.snake import Trajectory
from .metrics import window_indices

# Peaks below this (relative to the window length) count as a flat signal
FLAT_SIGNAL_TOLERANCE = 1e-12


def joint_spectrum(traj: Trajectory, window_start: float, window_end: float) -> JointSpectrum:
    """
    Rectangular-window DFT of the mean-removed joint angles sampled at k0..k1-1.
    The dominant bin is the largest non-DC magnitude; amplitude is 2|X_k| / M.
    """
    k0, k1 = window_indices(traj, window_start, window_end)
    signal = traj.angles[k0:k1, 1:]
    m = len(signal)
    if m < 2:
        raise ConfigError('Spectrum window needs at least two samples')
    spectrum = np.fft.rfft(signal - signal.mean(axis=0), axis=0)
    freqs = np.fft.rfftfreq(m, traj.dt)
    magnitude = np.abs(spectrum[1:])
    dominant = np.argmax(magnitude, axis=0)
    peak = magnitude[dominant, np.arange(signal.shape[1])]
    flat = peak <= FLAT_SIGNAL_TOLERANCE * m
    return JointSpectrum(
        dominant_frequency=np.where(flat, 0.0, freqs[dominant + 1]),
        dominant_amplitude=np.where(flat, 0.0, 2.0 * peak / m),
    )
