"""baseline/pareto.py: Speed/power Pareto front."""

from typing import List, Sequence

import numpy as np

from models.reports import ParetoPoint


def dominates(a: ParetoPoint, b: ParetoPoint) -> bool:
    """a is at least as fast and at most as costly as b, strictly better in one of them."""
    return a.speed >= b.speed and a.power <= b.power and (a.speed > b.speed or a.power < b.power)


def pareto_front(points: Sequence[ParetoPoint]) -> List[ParetoPoint]:
    """Undominated points (maximize speed, minimize power), sorted by speed ascending.

    Duplicated (speed, power) pairs keep the first point in input order.
    """
    order = sorted(range(len(points)), key=lambda i: (-points[i].speed, points[i].power, i))
    front = []
    best_power = np.inf
    for i in order:
        if points[i].power < best_power:
            front.append(points[i])
            best_power = points[i].power
    return front[::-1]


def interpolate_power(front: Sequence[ParetoPoint], speed: float) -> float:
    """
    Power the front needs to reach `speed`, linear between front points.
    Below the slowest front gait this is that gait's power; above the fastest it is inf.
    """
    if not front:
        raise ValueError('Cannot interpolate an empty front')
    speeds = np.array([p.speed for p in front])
    powers = np.array([p.power for p in front])
    if speed > speeds[-1]:
        return float('inf')
    return float(np.interp(speed, speeds, powers))
