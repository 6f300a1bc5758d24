"""
Reaction-force models (strategy pattern).

- BaseEnvironment: abstract strategy returning per-link reaction forces and mass matrices
- BoxDry: component-wise Coulomb friction
- SmoothDry: smooth anisotropic dry friction obeying maximum dissipation
- Viscous: anisotropic viscous friction
- Fluid: quadratic drag plus anisotropic added mass
"""

from typing import Any, Dict, Union

from models.exceptions import ConfigError
from .base_environment import BaseEnvironment, axial_to_world, smooth_sign
from .dry_friction import BoxDry, SmoothDry, box_friction, smooth_dry_friction
from .viscous import Viscous, viscous_friction
from .fluid import Fluid, added_mass, added_mass_matrix, drag_force

EnvironmentModel = Union[BoxDry, SmoothDry, Viscous, Fluid]

ENVIRONMENTS = {
    'box': BoxDry,
    'dry': SmoothDry,
    'viscous': Viscous,
    'fluid': Fluid,
}


def build_environment(name: str, **coefficients: Any) -> BaseEnvironment:
    """Instantiate an environment by name; unknown names or coefficients raise ConfigError."""
    try:
        cls = ENVIRONMENTS[name]
    except KeyError:
        raise ConfigError(f'Unknown environment {name!r}; expected one of {sorted(ENVIRONMENTS)}')
    try:
        return cls(**coefficients)
    except TypeError as e:
        raise ConfigError(f'Bad coefficients for environment {name!r}: {e}')


def environment_from_dict(data: Dict[str, Any]) -> BaseEnvironment:
    data = dict(data)
    return build_environment(data.pop('kind'), **data)


__all__ = [
    'BaseEnvironment',
    'EnvironmentModel',
    'ENVIRONMENTS',
    'BoxDry',
    'SmoothDry',
    'Viscous',
    'Fluid',
    'axial_to_world',
    'smooth_sign',
    'box_friction',
    'smooth_dry_friction',
    'viscous_friction',
    'drag_force',
    'added_mass',
    'added_mass_matrix',
    'build_environment',
    'environment_from_dict',
]
