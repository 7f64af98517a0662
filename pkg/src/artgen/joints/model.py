"""Joint data model and quaternion helpers.

Simple joints are the four URDF kinds (revolute, prismatic, continuous,
fixed). Higher-DOF motions are compound joints -- cylindrical, planar,
gimbal -- expressed as chains of simple joints separated by shapeless dummy
links, expanded before export so URDF only ever sees simple kinds.
Quaternions use (w, x, y, z) order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

REVOLUTE = "revolute"
PRISMATIC = "prismatic"
CONTINUOUS = "continuous"
FIXED = "fixed"
SIMPLE_KINDS = (REVOLUTE, PRISMATIC, CONTINUOUS, FIXED)

CYLINDRICAL = "cylindrical"
PLANAR = "planar"
GIMBAL = "gimbal"
COMPOUND_KINDS = (CYLINDRICAL, PLANAR, GIMBAL)

LIMITED_KINDS = (REVOLUTE, PRISMATIC)


def quat_identity() -> np.ndarray:
    return np.array([1.0, 0.0, 0.0, 0.0])


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=np.float64)
    axis = axis / np.linalg.norm(axis)
    h = 0.5 * angle
    return np.concatenate([[np.cos(h)], np.sin(h) * axis])


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    w, x, y, z = q
    return np.array([
        [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
        [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
    ])


def matrix_to_quat(m: np.ndarray) -> np.ndarray:
    """Branch-stable rotation-matrix -> quaternion (w kept non-negative)."""
    t = np.trace(m)
    if t > 0:
        s = np.sqrt(t + 1.0) * 2
        q = np.array([0.25 * s,
                      (m[2, 1] - m[1, 2]) / s,
                      (m[0, 2] - m[2, 0]) / s,
                      (m[1, 0] - m[0, 1]) / s])
    else:
        i = int(np.argmax(np.diag(m)))
        j, k = (i + 1) % 3, (i + 2) % 3
        s = np.sqrt(max(1.0 + m[i, i] - m[j, j] - m[k, k], 0.0)) * 2
        q = np.empty(4)
        q[0] = (m[k, j] - m[j, k]) / s
        q[1 + i] = 0.25 * s
        q[1 + j] = (m[j, i] + m[i, j]) / s
        q[1 + k] = (m[k, i] + m[i, k]) / s
    if q[0] < 0:
        q = -q
    return q / np.linalg.norm(q)


@dataclass
class JointSpec:
    """One simple joint: kind, origin pose in the parent frame, axis, limits."""

    kind: str
    origin_xyz: np.ndarray = field(default_factory=lambda: np.zeros(3))
    origin_quat: np.ndarray = field(default_factory=quat_identity)
    axis: np.ndarray | None = None
    limits: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        self.origin_xyz = np.asarray(self.origin_xyz, dtype=np.float64)
        self.origin_quat = np.asarray(self.origin_quat, dtype=np.float64)
        if self.axis is not None:
            self.axis = np.asarray(self.axis, dtype=np.float64)

    def check(self) -> None:
        if self.kind not in SIMPLE_KINDS:
            raise ValueError(f"unknown simple joint kind {self.kind!r}")
        if abs(float(np.linalg.norm(self.origin_quat)) - 1.0) > 1e-9:
            raise ValueError("origin quaternion not unit")
        if self.kind != FIXED:
            if self.axis is None or abs(float(np.linalg.norm(self.axis)) - 1.0) > 1e-9:
                raise ValueError(f"{self.kind} joint needs a unit axis")
        if self.kind in LIMITED_KINDS:
            if self.limits is None or not (self.limits[0] < self.limits[1]):
                raise ValueError(f"{self.kind} joint needs ordered limits")
        elif self.limits is not None:
            raise ValueError(f"{self.kind} joint must not carry limits")

    def rest_value(self) -> float:
        if self.limits is None:
            return 0.0
        lo, hi = self.limits
        return 0.0 if lo <= 0.0 <= hi else lo


@dataclass
class CompoundJointSpec:
    """Chain of simple joints with dummy links, ending at the real child.

    `chain` holds (JointSpec, dummy-link-label-or-None) pairs; every entry but
    the last names the dummy link inserted after its joint, the last entry's
    joint attaches the real child.
    """

    kind: str
    chain: list[tuple[JointSpec, str | None]]

    def check(self) -> None:
        if self.kind not in COMPOUND_KINDS:
            raise ValueError(f"unknown compound kind {self.kind!r}")
        if len(self.chain) < 2:
            raise ValueError("compound chain needs >= 2 simple joints")
        for spec, _ in self.chain:
            spec.check()
        kinds = [spec.kind for spec, _ in self.chain]
        axes = [spec.axis for spec, _ in self.chain]
        if self.kind == CYLINDRICAL:
            if sorted(kinds) not in (["continuous", "prismatic"],
                                     ["prismatic", "revolute"]):
                raise ValueError("cylindrical = one revolute/continuous + one prismatic")
            if abs(abs(float(np.dot(axes[0], axes[1]))) - 1.0) > 1e-9:
                raise ValueError("cylindrical joints must share an axis")
        elif self.kind == PLANAR:
            if kinds != ["prismatic", "prismatic"]:
                raise ValueError("planar = two prismatic joints")
            if abs(float(np.dot(axes[0], axes[1]))) > 1e-9:
                raise ValueError("planar axes must be orthogonal")
        elif self.kind == GIMBAL:
            if kinds != ["revolute", "revolute"]:
                raise ValueError("gimbal = two revolute joints")
            if abs(float(np.dot(axes[0], axes[1]))) > 1e-9:
                raise ValueError("gimbal axes must be orthogonal")
            for spec, _ in self.chain[1:]:
                if float(np.linalg.norm(spec.origin_xyz)) > 1e-9:
                    raise ValueError("gimbal joints must share a common point")
