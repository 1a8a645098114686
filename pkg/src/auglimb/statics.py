"""Gravity loading and tip-payload analysis.

Every revolute joint reports the static torque about its axis from all distal
lumped masses (link structure at midpoints, motors at link origins, payload at
the gripper tip); the extension joint reports axial force instead.  Torque is
affine in the tip load, so the maximum payload under the configured drive
limits has a closed form per joint; the smallest bound wins and names the
binding joint.

Units: torque rows are N*mm, the prismatic row is newtons; masses grams;
gravity mm/s^2 (default (0, 0, -9810), i.e. 9.81 m/s^2 along -z of the base).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kinematics import _check_state, _propagate
from .model import JointKind, KinematicModel

GRAVITY_DEFAULT = (0.0, 0.0, -9810.0)

# grams * mm/s^2 -> newtons
_FORCE_PER_GRAM = 1e-6


@dataclass(frozen=True)
class JointLoadRow:
    joint: str
    gravity_load: float  # N*mm about the axis (N axial for the extension joint)
    payload_load: float  # contribution of the evaluated tip load
    limit: float
    margin: float  # limit - |gravity_load + payload_load|
    unit: str  # "N*mm" or "N"


@dataclass(frozen=True)
class StaticsReport:
    rows: tuple[JointLoadRow, ...]
    max_payload: float  # grams
    binding_joint: str
    configuration: tuple[float, ...]
    gravity: tuple[float, float, float]
    tip_load: float  # grams at which the rows were evaluated
    limits_note: str = "limits: configured"  # drive ratings are config, not measured


def _loads(model: KinematicModel, state, gravity) -> tuple[list, np.ndarray, np.ndarray]:
    """Per-joint (name, unit, gravity load, per-gram payload coefficient, limit)."""
    values = _check_state(model, state, strict=False)
    g = np.asarray(gravity, dtype=float)
    chain = _propagate(model, values)
    tool = chain.frames["tool"].position
    unit_force = _FORCE_PER_GRAM * g
    rows = []
    for i, (joint, link) in enumerate(zip(model.joints, model.links)):
        if not joint.affects_pose:
            continue
        origin, axis = chain.origins[i], chain.axes[i]
        prismatic = joint.kind is JointKind.PRISMATIC_SCISSOR
        load = 0.0
        for link_index, pos, grams in chain.mass_points:
            if link_index < i:
                continue  # carried by the proximal side
            force = grams * _FORCE_PER_GRAM * g
            if prismatic:
                load += float(axis @ force)
            else:
                load += float(axis @ np.cross(pos - origin, force))
        if prismatic:
            coeff = float(axis @ unit_force)
        else:
            coeff = float(axis @ np.cross(tool - origin, unit_force))
        rows.append(
            (joint.name, "N" if prismatic else "N*mm", load, coeff, link.motor_torque_limit)
        )
    return rows, values, g


def gravity_torques(
    model: KinematicModel, state, tip_load: float = 0.0, gravity=GRAVITY_DEFAULT
) -> list[JointLoadRow]:
    """Static load rows at the given configuration and tip load (grams)."""
    if tip_load < 0:
        raise ValueError("tipLoad must be >= 0")
    raw, _, _ = _loads(model, state, gravity)
    return [
        JointLoadRow(
            joint=name,
            gravity_load=load,
            payload_load=tip_load * coeff,
            limit=limit,
            margin=limit - abs(load + tip_load * coeff),
            unit=unit,
        )
        for name, unit, load, coeff, limit in raw
    ]


def max_payload(model: KinematicModel, state, gravity=GRAVITY_DEFAULT) -> StaticsReport:
    """Largest tip load keeping every joint inside its drive limit.

    Load is affine in the tip mass, so each joint bounds the payload in closed
    form; a joint already saturated by gravity alone forces zero.
    """
    raw, values, g = _loads(model, state, gravity)
    best = math.inf
    binding = ""
    for name, _, load, coeff, limit in raw:
        if abs(load) > limit:
            bound = 0.0
        elif coeff == 0.0:
            continue  # payload exerts nothing about this axis
        elif coeff > 0.0:
            bound = (limit - load) / coeff
        else:
            bound = (-limit - load) / coeff
        if bound < best:
            best, binding = bound, name
    if math.isinf(best):
        best, binding = math.inf, ""
    payload = max(0.0, best)
    rows = gravity_torques(model, values, 0.0 if math.isinf(payload) else payload, g)
    return StaticsReport(
        rows=tuple(rows),
        max_payload=payload,
        binding_joint=binding,
        configuration=tuple(float(v) for v in values),
        gravity=(float(g[0]), float(g[1]), float(g[2])),
        tip_load=0.0 if math.isinf(payload) else payload,
    )
