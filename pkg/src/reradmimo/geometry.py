"""Uniform square arrays with arbitrary orientation, and element distances.

An unrotated array lies in the y-z plane (broadside along x). Orientation
angles (yaw, pitch, roll) are applied as intrinsic Z-Y-X rotations, i.e.
``R = Rz(yaw) @ Ry(pitch) @ Rx(roll)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveSpacing, NotPerfectSquare, OverlappingElements

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class ArrayPose:
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    orientation: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        center = tuple(float(x) for x in self.center)
        orient = tuple(float(a) for a in self.orientation)
        if len(center) != 3 or len(orient) != 3:
            raise ValueError("center and orientation must have three components")
        if any(not (0.0 <= a < TWO_PI) for a in orient):
            raise ValueError(f"orientation angles must lie in [0, 2pi), got {orient}")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "orientation", orient)


@dataclass(frozen=True)
class ArrayGeometry:
    element_positions: np.ndarray  # (n, 3)
    spacing: float
    pose: ArrayPose

    @property
    def n(self) -> int:
        return self.element_positions.shape[0]

    @property
    def diagonal(self) -> float:
        side = math.isqrt(self.n) - 1
        return side * self.spacing * math.sqrt(2.0)


def rotation_matrix(yaw: float, pitch: float, roll: float) -> np.ndarray:
    cz, sz = math.cos(yaw), math.sin(yaw)
    cy, sy = math.cos(pitch), math.sin(pitch)
    cx, sx = math.cos(roll), math.sin(roll)
    rz = np.array([[cz, -sz, 0.0], [sz, cz, 0.0], [0.0, 0.0, 1.0]])
    ry = np.array([[cy, 0.0, sy], [0.0, 1.0, 0.0], [-sy, 0.0, cy]])
    rx = np.array([[1.0, 0.0, 0.0], [0.0, cx, -sx], [0.0, sx, cx]])
    return rz @ ry @ rx


def build_square_array(n: int, spacing: float, pose: ArrayPose = ArrayPose()) -> ArrayGeometry:
    m = math.isqrt(n) if n > 0 else 0
    if n < 1 or m * m != n:
        raise NotPerfectSquare(f"element count must be a perfect square, got {n}")
    if not spacing > 0:
        raise NonPositiveSpacing(f"spacing must be > 0, got {spacing}")
    offsets = (np.arange(m) - (m - 1) / 2.0) * spacing
    yy, zz = np.meshgrid(offsets, offsets, indexing="ij")
    local = np.column_stack([np.zeros(n), yy.ravel(), zz.ravel()])
    rot = rotation_matrix(*pose.orientation)
    positions = local @ rot.T + np.asarray(pose.center)
    positions.setflags(write=False)
    return ArrayGeometry(positions, float(spacing), pose)


def pairwise_distances(tx: ArrayGeometry, rx: ArrayGeometry) -> np.ndarray:
    """Matrix ``D[i, j]`` = distance from rx element i to tx element j."""
    diff = rx.element_positions[:, None, :] - tx.element_positions[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    limit = min(tx.spacing, rx.spacing) / 1000.0
    if dist.min() < limit:
        i, j = np.unravel_index(np.argmin(dist), dist.shape)
        raise OverlappingElements(
            f"rx element {i} and tx element {j} are {dist[i, j]:.3g} m apart"
        )
    return dist


def random_pose(rng: np.random.Generator, center=(0.0, 0.0, 0.0)) -> ArrayPose:
    angles = rng.uniform(0.0, TWO_PI, size=3)
    # uniform() can round up to the open endpoint
    angles = np.where(angles >= TWO_PI, 0.0, angles)
    return ArrayPose(tuple(center), tuple(angles))


def link_arrays(
    n_tx: int,
    n_rx: int,
    spacing: float,
    distance: float,
    tx_pose: ArrayPose | None = None,
    rx_pose: ArrayPose | None = None,
) -> tuple[ArrayGeometry, ArrayGeometry]:
    """Tx centred at the origin and rx at ``(distance, 0, 0)``."""
    tx_pose = tx_pose or ArrayPose()
    rx_pose = rx_pose or ArrayPose()
    tx_pose = ArrayPose((0.0, 0.0, 0.0), tx_pose.orientation)
    rx_pose = ArrayPose((float(distance), 0.0, 0.0), rx_pose.orientation)
    tx = build_square_array(n_tx, spacing, tx_pose)
    rx = build_square_array(n_rx, spacing, rx_pose)
    warn_if_near_field(tx, rx, distance)
    return tx, rx


def warn_if_near_field(tx: ArrayGeometry, rx: ArrayGeometry, distance: float) -> bool:
    """Warn when either array diagonal exceeds a tenth of the link distance."""
    if max(tx.diagonal, rx.diagonal) > distance / 10.0:
        warnings.warn(
            f"array diagonal {max(tx.diagonal, rx.diagonal):.3g} m exceeds d/10 "
            f"at d = {distance:g} m; the K-factor far-field assumption is weak",
            stacklevel=3,
        )
        return True
    return False
