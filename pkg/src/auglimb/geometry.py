"""Rigid-transform primitives shared by the kinematics, statics and workspace code."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ORTHONORMAL_TOL = 1e-9


@dataclass(eq=False)
class Pose:
    """World-from-frame transform: position in mm, 3x3 rotation matrix."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    rotation: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        self.rotation = np.asarray(self.rotation, dtype=float).reshape(3, 3)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pose):
            return NotImplemented
        return np.array_equal(self.position, other.position) and np.array_equal(
            self.rotation, other.rotation
        )

    @classmethod
    def identity(cls) -> "Pose":
        return cls()

    def validate(self) -> None:
        """Raise if the rotation is not orthonormal with determinant +1."""
        err = np.abs(self.rotation.T @ self.rotation - np.eye(3)).max()
        if err > ORTHONORMAL_TOL:
            raise ValueError(f"rotation not orthonormal (max deviation {err:.3e})")
        if abs(np.linalg.det(self.rotation) - 1.0) > ORTHONORMAL_TOL:
            raise ValueError("rotation determinant is not +1")

    def transform_point(self, p) -> np.ndarray:
        return self.position + self.rotation @ np.asarray(p, dtype=float)


def rotation_about_axis(axis, angle: float) -> np.ndarray:
    """Rodrigues rotation matrix about a unit axis."""
    ax = np.asarray(axis, dtype=float)
    k = np.array(
        [
            [0.0, -ax[2], ax[1]],
            [ax[2], 0.0, -ax[0]],
            [-ax[1], ax[0], 0.0],
        ]
    )
    s, c = np.sin(angle), np.cos(angle)
    return np.eye(3) + s * k + (1.0 - c) * (k @ k)


def axis_angle_from_matrix(rot: np.ndarray) -> np.ndarray:
    """Rotation vector (axis * angle) of a rotation matrix.

    Smooth near the identity; handles the angle = pi branch where the skew part
    vanishes.
    """
    trace = np.clip((np.trace(rot) - 1.0) / 2.0, -1.0, 1.0)
    angle = np.arccos(trace)
    if angle < 1e-12:
        return np.zeros(3)
    w = np.array(
        [
            rot[2, 1] - rot[1, 2],
            rot[0, 2] - rot[2, 0],
            rot[1, 0] - rot[0, 1],
        ]
    )
    if np.pi - angle > 1e-6:
        return w * (angle / (2.0 * np.sin(angle)))
    # near pi: extract axis from the symmetric part
    sym = (rot + np.eye(3)) / 2.0
    axis = np.sqrt(np.clip(np.diag(sym), 0.0, None))
    # fix signs from the off-diagonal entries
    imax = int(np.argmax(axis))
    if axis[imax] > 0:
        for j in range(3):
            if j != imax:
                axis[j] = sym[imax, j] / axis[imax]
    n = np.linalg.norm(axis)
    if n == 0.0:
        return np.zeros(3)
    axis /= n
    if np.dot(axis, w) < 0:
        axis = -axis
    return axis * angle
