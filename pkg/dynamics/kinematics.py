"""dynamics/kinematics.py: Planar forward kinematics of the n-link chain."""

from typing import List, NamedTuple, Union

import numpy as np

from models.snake import LinkFrame, SnakeParams, SnakeState

StateLike = Union[SnakeState, np.ndarray]


class ChainKinematics(NamedTuple):
    """Array form of the link frames (n = number of links)."""

    angles: np.ndarray  # (n,) world angle of each link frame
    rates: np.ndarray  # (n,) world angular velocity of each link
    axes: np.ndarray  # (n, 2) unit longitudinal axis e_i
    normals: np.ndarray  # (n, 2) d e_i / d theta_i
    joint_pos: np.ndarray  # (n, 2) proximal joints
    joint_vel: np.ndarray  # (n, 2)
    com_pos: np.ndarray  # (n, 2)
    com_vel: np.ndarray  # (n, 2)

    def local_com_vel(self) -> np.ndarray:
        return world_to_local(self.com_vel, self.angles)

    def axial_com_vel(self) -> np.ndarray:
        """CoM velocities in (longitudinal, transverse) ordering."""
        return self.local_com_vel()[:, ::-1]

    def tail_pos(self, lengths: np.ndarray) -> np.ndarray:
        return self.joint_pos[-1] + lengths[-1] * self.axes[-1]


def as_vector(state: StateLike) -> np.ndarray:
    if isinstance(state, SnakeState):
        return state.to_vector()
    return np.asarray(state, dtype=float)


def world_to_local(vectors: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Rotate world vectors (n, 2) by -angle into link frames (x transverse, y longitudinal)."""
    cos, sin = np.cos(angles), np.sin(angles)
    x, y = vectors[..., 0], vectors[..., 1]
    return np.stack([cos * x + sin * y, -sin * x + cos * y], axis=-1)


def local_to_world(vectors: np.ndarray, angles: np.ndarray) -> np.ndarray:
    cos, sin = np.cos(angles), np.sin(angles)
    x, y = vectors[..., 0], vectors[..., 1]
    return np.stack([cos * x - sin * y, sin * x + cos * y], axis=-1)


def chain_kinematics(state: StateLike, params: SnakeParams) -> ChainKinematics:
    x = as_vector(state)
    n = params.n_links
    lengths = params.link_lengths()
    angles = np.cumsum(x[2 : 2 + n])
    rates = np.cumsum(x[4 + n : 4 + 2 * n])
    sin, cos = np.sin(angles), np.cos(angles)
    axes = np.stack([-sin, cos], axis=-1)
    normals = np.stack([-cos, -sin], axis=-1)

    joint_pos = np.empty((n, 2))
    joint_vel = np.empty((n, 2))
    joint_pos[0] = x[0:2]
    joint_vel[0] = x[2 + n : 4 + n]
    for i in range(1, n):
        joint_pos[i] = joint_pos[i - 1] + lengths[i - 1] * axes[i - 1]
        joint_vel[i] = joint_vel[i - 1] + lengths[i - 1] * rates[i - 1] * normals[i - 1]

    half = 0.5 * lengths[:, None]
    com_pos = joint_pos + half * axes
    com_vel = joint_vel + half * rates[:, None] * normals
    return ChainKinematics(angles, rates, axes, normals, joint_pos, joint_vel, com_pos, com_vel)


def forward_kinematics(state: StateLike, params: SnakeParams) -> List[LinkFrame]:
    """Per-link proximal joint, world angle, CoM position and CoM velocity (world and local)."""
    chain = chain_kinematics(state, params)
    local = chain.local_com_vel()
    lengths = params.link_lengths()
    return [
        LinkFrame(
            joint_pos=chain.joint_pos[i],
            angle=float(chain.angles[i]),
            com_pos=chain.com_pos[i],
            com_vel_world=chain.com_vel[i],
            com_vel_local=local[i],
            length=float(lengths[i]),
            angular_vel=float(chain.rates[i]),
        )
        for i in range(params.n_links)
    ]


def segment_endpoints(state: StateLike, params: SnakeParams) -> np.ndarray:
    """Proximal and distal joint of every link, shape (n, 2, 2)."""
    chain = chain_kinematics(state, params)
    distal = chain.joint_pos + params.link_lengths()[:, None] * chain.axes
    return np.stack([chain.joint_pos, distal], axis=1)
