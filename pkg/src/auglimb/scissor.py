"""Kinematics of the double-layer scissor extension unit.

The unit is a pantograph of ``stages`` crossed link pairs per layer.  Each
crossing contributes ``2 * half_link * sin(theta)`` of length along the travel
axis (theta is the cross angle), plus a fixed hinge stack-up at the ends:

    extension(theta) = hinge_offset + 2 * stages * half_link * sin(theta)

The drive is a leadscrew closing the base pivot pair.  The pair width is
``w(theta) = 2 * half_link * cos(theta)`` and screw travel is measured from the
retracted stop, ``s = w(theta_min) - w(theta)``, so s grows monotonically from
0 (retracted) to ``actuator_travel_max`` (extended).

Both parallel layers share one theta; ``layers`` affects only mass and
stiffness bookkeeping, never a kinematic output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

# Tolerance absorbing round-trip float fuzz on interval checks (mm / rad).
_EPS = 1e-9


@dataclass(frozen=True)
class ScissorParams:
    """Geometry of the scissor unit.

    stages: crossings in series per layer (N >= 1)
    half_link: pivot-to-center link half-length a, mm
    hinge_offset: fixed stack-up at both ends combined, mm
    layers: parallel identical scissor planes
    theta_range: (theta_min, theta_max) cross-angle travel, rad,
        with 0 < theta_min < theta_max < pi/2
    actuator_pitch: leadscrew advance per motor revolution, mm
    """

    stages: int
    half_link: float
    hinge_offset: float
    layers: int
    theta_range: tuple[float, float]
    actuator_pitch: float

    def __post_init__(self):
        if self.stages < 1:
            raise ValueError(f"stages must be >= 1, got {self.stages}")
        if self.half_link <= 0:
            raise ValueError(f"halfLink must be > 0, got {self.half_link}")
        if self.hinge_offset < 0:
            raise ValueError(f"hingeOffset must be >= 0, got {self.hinge_offset}")
        if self.layers < 1:
            raise ValueError(f"layers must be >= 1, got {self.layers}")
        lo, hi = self.theta_range
        if not (0.0 < lo < hi < math.pi / 2):
            raise ValueError(
                f"thetaRange must satisfy 0 < min < max < pi/2, got [{lo}, {hi}]"
            )
        if self.actuator_pitch <= 0:
            raise ValueError(f"actuatorPitch must be > 0, got {self.actuator_pitch}")


@dataclass(frozen=True)
class ScissorState:
    """Internal coordinate of the extension unit."""

    theta: float


def default_params() -> ScissorParams:
    """Parameters of the built-in unit: travel 70 mm retracted to 250 mm extended.

    Two stages of 60 mm half-links with a 30 mm end stack-up hit both travel
    endpoints exactly: sin(theta) spans [1/6, 11/12].
    """
    return ScissorParams(
        stages=2,
        half_link=60.0,
        hinge_offset=30.0,
        layers=2,
        theta_range=(math.asin(1.0 / 6.0), math.asin(11.0 / 12.0)),
        actuator_pitch=0.7,
    )


def _check_theta(p: ScissorParams, theta: float) -> None:
    lo, hi = p.theta_range
    if not (lo - _EPS <= theta <= hi + _EPS):
        raise ValueError(f"theta {theta} outside range [{lo}, {hi}]")


def extension_of_theta(p: ScissorParams, theta: float) -> float:
    """Extension length (mm) at cross angle theta."""
    _check_theta(p, theta)
    return p.hinge_offset + 2.0 * p.stages * p.half_link * math.sin(theta)


def extension_range(p: ScissorParams) -> tuple[float, float]:
    """(min, max) achievable extension in mm."""
    lo, hi = p.theta_range
    return extension_of_theta(p, lo), extension_of_theta(p, hi)


def theta_of_extension(p: ScissorParams, e: float) -> float:
    """Cross angle achieving extension e (mm). Inverse of extension_of_theta."""
    e_lo, e_hi = extension_range(p)
    if not (e_lo - _EPS <= e <= e_hi + _EPS):
        raise ValueError(f"extension {e} outside achievable range [{e_lo}, {e_hi}]")
    arg = (e - p.hinge_offset) / (2.0 * p.stages * p.half_link)
    theta = math.asin(min(1.0, max(-1.0, arg)))
    lo, hi = p.theta_range
    return min(hi, max(lo, theta))


def extension_ratio(p: ScissorParams) -> float:
    """Extended over retracted length, e(theta_max) / e(theta_min)."""
    e_lo, e_hi = extension_range(p)
    return e_hi / e_lo


def actuator_travel_max(p: ScissorParams) -> float:
    """Leadscrew travel (mm) between the retracted and extended stops."""
    lo, hi = p.theta_range
    return 2.0 * p.half_link * (math.cos(lo) - math.cos(hi))


def actuator_to_theta(p: ScissorParams, s: float) -> float:
    """Cross angle at screw travel s in [0, actuator_travel_max]."""
    s_max = actuator_travel_max(p)
    if not (-_EPS <= s <= s_max + _EPS):
        raise ValueError(f"actuator travel {s} outside [0, {s_max}]")
    lo, hi = p.theta_range
    arg = math.cos(lo) - s / (2.0 * p.half_link)
    theta = math.acos(min(1.0, max(-1.0, arg)))
    return min(hi, max(lo, theta))


def theta_to_actuator(p: ScissorParams, theta: float) -> float:
    """Screw travel producing cross angle theta. Inverse of actuator_to_theta."""
    _check_theta(p, theta)
    lo, _ = p.theta_range
    return 2.0 * p.half_link * (math.cos(lo) - math.cos(theta))


def d_extension_d_actuator(p: ScissorParams, s: float) -> float:
    """Transmission gain de/ds at screw travel s.

    de/ds = (de/dtheta) / (ds/dtheta) = stages * cot(theta); finite on the whole
    travel because theta_min > 0.
    """
    theta = actuator_to_theta(p, s)
    return p.stages * math.cos(theta) / math.sin(theta)
