"""Declarative description of the limb: joints, links, masses, motors, limits.

The built-in model is the implemented prototype: a 7-DOF chain (shoulder-r,
shoulder-t, elbow, wrist-r, wrist-t, gripper-r, gripper) plus the scissor
extension unit, 640 g total, 630 mm straight-chain reach without the gripper
and 710 mm with it.

Conventions: each link extends along its local +x axis, twist joints rotate
about +x, hinge joints about +y (so the zero state is the straight chain along
base x and hinges swing it through the x-z plane).  Revolute values are
radians, the extension value is millimeters of scissor travel.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np
import yaml

from .geometry import Pose
from .scissor import ScissorParams, extension_range
from .scissor import default_params as default_scissor_params

FOREARM_LENGTH_MM = 250.0  # adult male forearm, the reach yardstick

JointState = np.ndarray  # one value per joint, model order


class ModelError(ValueError):
    """Config parse or validation failure."""


class JointKind(str, enum.Enum):
    REVOLUTE_TWIST = "revolute-twist"  # rotation about the link's long axis
    REVOLUTE_HINGE = "revolute-hinge"  # rotation about an axis perpendicular to the link
    PRISMATIC_SCISSOR = "prismatic-scissor"  # the extension unit
    GRIPPER_APERTURE = "gripper-aperture"  # open/close, pose-irrelevant


@dataclass(frozen=True)
class JointSpec:
    name: str
    kind: JointKind
    axis: tuple[float, float, float]
    limits: tuple[float, float]  # rad for revolute kinds, mm for the prismatic
    home: float
    implemented: bool = True

    @property
    def affects_pose(self) -> bool:
        return self.kind is not JointKind.GRIPPER_APERTURE


@dataclass(frozen=True)
class LinkSpec:
    """Segment following a joint. Mass lumps at the midpoint, motor at the origin."""

    name: str
    length: float  # mm, offset along local +x to the next joint origin
    mass: float  # g, structure mass
    motor_mass: float  # g
    motor_torque_limit: float  # N*mm (axial newtons for the extension link)
    motor: str = ""


@dataclass(frozen=True)
class Keyframe:
    values: tuple[float, ...]
    dwell: float = 0.0  # seconds to hold before moving to the next keyframe


@dataclass(frozen=True)
class KinematicModel:
    joints: tuple[JointSpec, ...]
    links: tuple[LinkSpec, ...]
    scissor: ScissorParams
    gripper_length: float
    base_pivot: Pose = field(default_factory=Pose.identity)
    named_poses: dict[str, tuple[float, ...]] = field(default_factory=dict)
    expand_macro: tuple[Keyframe, ...] = ()

    @property
    def n_joints(self) -> int:
        return len(self.joints)

    def joint_index(self, name: str) -> int:
        for i, j in enumerate(self.joints):
            if j.name == name:
                return i
        raise KeyError(f"no joint named {name!r}")

    def joint_names(self) -> list[str]:
        return [j.name for j in self.joints]

    def pose_joint_indices(self) -> list[int]:
        """Indices of implemented pose-affecting joints (Jacobian column order)."""
        return [
            i for i, j in enumerate(self.joints) if j.affects_pose and j.implemented
        ]

    def extension_index(self) -> int:
        for i, j in enumerate(self.joints):
            if j.kind is JointKind.PRISMATIC_SCISSOR:
                return i
        raise KeyError("model has no prismatic-scissor joint")

    def chain_length(self) -> float:
        return sum(l.length for l in self.links)

    def total_mass(self) -> float:
        return sum(l.mass + l.motor_mass for l in self.links)


def home_state(model: KinematicModel) -> JointState:
    return np.array([j.home for j in model.joints], dtype=float)


def straight_state(model: KinematicModel, extension: float | None = None) -> JointState:
    """All revolute joints at zero (segments aligned with base x), given extension."""
    state = np.zeros(model.n_joints)
    ext = model.extension_index()
    lo, hi = model.joints[ext].limits
    state[ext] = hi if extension is None else extension
    return clamp_state(model, state)


def clamp_state(model: KinematicModel, state) -> JointState:
    """Clamp every value into its joint's limits; unimplemented joints go home."""
    values = np.asarray(state, dtype=float)
    if values.shape != (model.n_joints,):
        raise ValueError(
            f"state has shape {values.shape}, model has {model.n_joints} joints"
        )
    out = values.copy()
    for i, j in enumerate(model.joints):
        if not j.implemented:
            out[i] = j.home
        else:
            out[i] = min(j.limits[1], max(j.limits[0], out[i]))
    return out


def state_in_limits(model: KinematicModel, state) -> bool:
    values = np.asarray(state, dtype=float)
    if values.shape != (model.n_joints,):
        return False
    return bool(np.array_equal(values, clamp_state(model, values)))


# ---------------------------------------------------------------------------
# Built-in model
# ---------------------------------------------------------------------------

_TWIST_LIMIT = math.radians(150.0)
_HINGE_LIMIT = math.radians(105.0)
_APERTURE_MAX = math.radians(60.0)

TOTAL_MASS_G = 640.0

# Motor registry: typical mass (g) and drive limit per motor name.  Limits are
# configuration defaults in N*mm, except the extension pair whose entry is
# axial thrust in newtons at the extension coordinate.
MOTOR_REGISTRY: dict[str, tuple[float, float]] = {
    "GX3370BLS": (62.0, 4500.0),  # shoulder-r brushless servo
    "DS3235SG": (60.0, 3400.0),  # shoulder-t digital servo
    "S53-20": (58.0, 2500.0),  # elbow / wrist-r servos
    "DC6V-130": (12.0, 1500.0),  # wrist-t encoder gearmotor, 1:130 reduction
    "GA12-N20x2": (19.0, 30.0),  # paired extension gearmotors on the leadscrew
    "SG92R": (9.0, 250.0),  # gripper micro servo
}

# Non-extension segment split: 160 + 140 + 80 = 380 mm, so the straight chain
# reaches 380 + 250 = 630 mm at full extension, 710 mm with the 80 mm gripper.
_SEGMENTS = (0.0, 160.0, 140.0, 0.0, 80.0, 0.0, 0.0, 0.0)

COMPACT_POSE = (0.0, math.pi / 4, -math.pi / 2, 0.0, math.pi / 4, 70.0, 0.0, 0.0)

_STRAIGHT_RETRACTED = (0.0, 0.0, 0.0, 0.0, 0.0, 70.0, 0.0, 0.0)
_STRAIGHT_HALF = (0.0, 0.0, 0.0, 0.0, 0.0, 160.0, 0.0, 0.0)
_STRAIGHT_EXTENDED = (0.0, 0.0, 0.0, 0.0, 0.0, 250.0, 0.0, 0.0)

# Six-step unfold: wrist, then elbow, straighten, then extend in two stages.
EXPAND_KEYFRAMES = (
    Keyframe(COMPACT_POSE),
    Keyframe((0.0, math.pi / 4, -math.pi / 2, 0.0, 0.0, 70.0, 0.0, 0.0)),
    Keyframe((0.0, math.pi / 4, -math.pi / 4, 0.0, 0.0, 70.0, 0.0, 0.0)),
    Keyframe(_STRAIGHT_RETRACTED),
    Keyframe(_STRAIGHT_HALF),
    Keyframe(_STRAIGHT_EXTENDED),
)


def default_model() -> KinematicModel:
    """The implemented prototype as data."""
    x = (1.0, 0.0, 0.0)
    y = (0.0, 1.0, 0.0)
    twist = (-_TWIST_LIMIT, _TWIST_LIMIT)
    hinge = (-_HINGE_LIMIT, _HINGE_LIMIT)
    joints = (
        JointSpec("shoulder-r", JointKind.REVOLUTE_TWIST, x, twist, 0.0),
        JointSpec("shoulder-t", JointKind.REVOLUTE_HINGE, y, hinge, 0.0),
        JointSpec("elbow", JointKind.REVOLUTE_HINGE, y, hinge, 0.0),
        JointSpec("wrist-r", JointKind.REVOLUTE_TWIST, x, twist, 0.0),
        JointSpec("wrist-t", JointKind.REVOLUTE_HINGE, y, hinge, 0.0),
        JointSpec("extension", JointKind.PRISMATIC_SCISSOR, x, (70.0, 250.0), 70.0),
        # present in the design, not driven in the prototype
        JointSpec("gripper-r", JointKind.REVOLUTE_TWIST, x, twist, 0.0, implemented=False),
        JointSpec("gripper", JointKind.GRIPPER_APERTURE, y, (0.0, _APERTURE_MAX), 0.0),
    )
    motors = (
        "GX3370BLS",
        "DS3235SG",
        "S53-20",
        "S53-20",
        "DC6V-130",
        "GA12-N20x2",
        "",
        "SG92R",
    )
    names = (
        "shoulder-mount",
        "upper-segment",
        "forearm-segment",
        "wrist-housing",
        "extension-mount",
        "scissor-carriage",
        "gripper-hub",
        "gripper-jaw",
    )
    motor_total = sum(MOTOR_REGISTRY[m][0] for m in motors if m)
    structure_total = TOTAL_MASS_G - motor_total
    span = sum(_SEGMENTS)
    links = tuple(
        LinkSpec(
            name=names[i],
            length=_SEGMENTS[i],
            mass=structure_total * _SEGMENTS[i] / span,
            motor_mass=MOTOR_REGISTRY[m][0] if m else 0.0,
            motor_torque_limit=MOTOR_REGISTRY[m][1] if m else 250.0,
            motor=m,
        )
        for i, m in enumerate(motors)
    )
    return KinematicModel(
        joints=joints,
        links=links,
        scissor=default_scissor_params(),
        gripper_length=80.0,
        named_poses={"compact": COMPACT_POSE},
        expand_macro=EXPAND_KEYFRAMES,
    )


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


def validate_model(model: KinematicModel) -> None:
    """Check every structural invariant; raise ModelError naming the first violation."""
    if len(model.joints) != len(model.links):
        raise ModelError(
            f"{len(model.joints)} joints but {len(model.links)} links; each joint needs a link"
        )
    if not model.joints:
        raise ModelError("model has no joints")
    prismatic = [j for j in model.joints if j.kind is JointKind.PRISMATIC_SCISSOR]
    if len(prismatic) != 1:
        raise ModelError(
            f"exactly one prismatic-scissor joint required, found {len(prismatic)}"
        )
    seen: set[str] = set()
    for j in model.joints:
        if j.name in seen:
            raise ModelError(f"duplicate joint name {j.name!r}")
        seen.add(j.name)
        if j.limits[0] >= j.limits[1]:
            raise ModelError(f"limits.min >= limits.max on joint {j.name}")
        if not (j.limits[0] <= j.home <= j.limits[1]):
            raise ModelError(f"home outside limits on joint {j.name}")
        norm = math.sqrt(sum(a * a for a in j.axis))
        if abs(norm - 1.0) > 1e-12:
            raise ModelError(f"axis of joint {j.name} is not unit length (norm {norm})")
    for l in model.links:
        if l.length < 0:
            raise ModelError(f"negative length on link {l.name}")
        if l.mass < 0 or l.motor_mass < 0:
            raise ModelError(f"negative mass on link {l.name}")
        if l.motor_torque_limit <= 0:
            raise ModelError(f"motorTorqueLimit must be > 0 on link {l.name}")
    if model.gripper_length < 0:
        raise ModelError("gripperLength must be >= 0")
    ext = prismatic[0]
    e_lo, e_hi = extension_range(model.scissor)
    if ext.limits[0] < e_lo - 1e-6 or ext.limits[1] > e_hi + 1e-6:
        raise ModelError(
            f"extension limits {ext.limits} exceed the scissor's achievable "
            f"range [{e_lo:.6f}, {e_hi:.6f}]"
        )
    model.base_pivot.validate()
    for name, values in model.named_poses.items():
        _check_pose_values(model, values, f"pose {name!r}")
    for k, kf in enumerate(model.expand_macro):
        _check_pose_values(model, kf.values, f"expand keyframe {k}")
        if kf.dwell < 0:
            raise ModelError(f"negative dwell on expand keyframe {k}")
    if model.expand_macro and len(model.expand_macro) < 2:
        raise ModelError("expand macro needs at least 2 keyframes")


def _check_pose_values(model: KinematicModel, values, what: str) -> None:
    if len(values) != model.n_joints:
        raise ModelError(f"{what} has {len(values)} values, model has {model.n_joints} joints")
    for v, j in zip(values, model.joints):
        if not (j.limits[0] - 1e-9 <= v <= j.limits[1] + 1e-9):
            raise ModelError(f"{what} puts joint {j.name} at {v}, outside its limits")


# ---------------------------------------------------------------------------
# Config serialization (YAML, schemaVersion 1)
# ---------------------------------------------------------------------------

SCHEMA_VERSION = 1

_JOINT_KEYS = {"name", "kind", "axis", "limits", "home", "implemented"}
_JOINT_REQUIRED = {"name", "kind", "axis", "limits", "home"}
_LINK_KEYS = {"name", "length", "mass", "motorMass", "motorTorqueLimit", "motor"}
_LINK_REQUIRED = {"name", "length", "mass", "motorMass", "motorTorqueLimit"}
_SCISSOR_KEYS = {"stages", "halfLink", "hingeOffset", "layers", "thetaRange", "actuatorPitch"}
_TOP_KEYS = {
    "schemaVersion",
    "gripperLength",
    "basePivot",
    "scissor",
    "joints",
    "links",
    "poses",
    "expandMacro",
}
_TOP_REQUIRED = {"schemaVersion", "gripperLength", "scissor", "joints", "links"}


def serialize_model(model: KinematicModel) -> str:
    doc = {
        "schemaVersion": SCHEMA_VERSION,
        "gripperLength": model.gripper_length,
        "basePivot": {
            "position": [float(v) for v in model.base_pivot.position],
            "rotation": [[float(v) for v in row] for row in model.base_pivot.rotation],
        },
        "scissor": {
            "stages": model.scissor.stages,
            "halfLink": model.scissor.half_link,
            "hingeOffset": model.scissor.hinge_offset,
            "layers": model.scissor.layers,
            "thetaRange": list(model.scissor.theta_range),
            "actuatorPitch": model.scissor.actuator_pitch,
        },
        "joints": [
            {
                "name": j.name,
                "kind": j.kind.value,
                "axis": list(j.axis),
                "limits": list(j.limits),
                "home": j.home,
                "implemented": j.implemented,
            }
            for j in model.joints
        ],
        "links": [
            {
                "name": l.name,
                "length": l.length,
                "mass": l.mass,
                "motorMass": l.motor_mass,
                "motorTorqueLimit": l.motor_torque_limit,
                "motor": l.motor,
            }
            for l in model.links
        ],
    }
    if model.named_poses:
        doc["poses"] = {k: list(v) for k, v in model.named_poses.items()}
    if model.expand_macro:
        doc["expandMacro"] = [
            {"values": list(kf.values), "dwell": kf.dwell} for kf in model.expand_macro
        ]
    return yaml.safe_dump(doc, sort_keys=False)


def _require_mapping(obj, what: str) -> dict:
    if not isinstance(obj, dict):
        raise ModelError(f"{what} must be a mapping, got {type(obj).__name__}")
    return obj


def _check_keys(obj: dict, allowed: set, required: set, what: str) -> None:
    unknown = sorted(set(obj) - allowed)
    if unknown:
        raise ModelError(f"unknown field(s) on {what}: {', '.join(unknown)}")
    missing = sorted(required - set(obj))
    if missing:
        raise ModelError(f"missing required field(s) on {what}: {', '.join(missing)}")


def _float(obj, what: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ModelError(f"{what} must be a number, got {obj!r}")
    return float(obj)


def _float_list(obj, n: int, what: str) -> list[float]:
    if not isinstance(obj, (list, tuple)) or len(obj) != n:
        raise ModelError(f"{what} must be a list of {n} numbers")
    return [_float(v, what) for v in obj]


def load_model(config_text: str) -> KinematicModel:
    """Parse and validate a model config document."""
    try:
        doc = yaml.safe_load(config_text)
    except yaml.YAMLError as exc:
        raise ModelError(f"config parse error: {exc}") from exc
    doc = _require_mapping(doc, "config document")
    _check_keys(doc, _TOP_KEYS, _TOP_REQUIRED, "config document")
    if doc["schemaVersion"] != SCHEMA_VERSION:
        raise ModelError(
            f"unsupported schemaVersion {doc['schemaVersion']!r}; expected {SCHEMA_VERSION}"
        )

    sc = _require_mapping(doc["scissor"], "scissor")
    _check_keys(sc, _SCISSOR_KEYS, _SCISSOR_KEYS, "scissor")
    theta_range = _float_list(sc["thetaRange"], 2, "scissor.thetaRange")
    try:
        scissor = ScissorParams(
            stages=int(sc["stages"]),
            half_link=_float(sc["halfLink"], "scissor.halfLink"),
            hinge_offset=_float(sc["hingeOffset"], "scissor.hingeOffset"),
            layers=int(sc["layers"]),
            theta_range=(theta_range[0], theta_range[1]),
            actuator_pitch=_float(sc["actuatorPitch"], "scissor.actuatorPitch"),
        )
    except ValueError as exc:
        raise ModelError(f"scissor: {exc}") from exc

    if not isinstance(doc["joints"], list):
        raise ModelError("joints must be a list")
    joints = []
    for entry in doc["joints"]:
        entry = _require_mapping(entry, "joint entry")
        name = entry.get("name", "<unnamed>")
        _check_keys(entry, _JOINT_KEYS, _JOINT_REQUIRED, f"joint {name}")
        try:
            kind = JointKind(entry["kind"])
        except ValueError:
            raise ModelError(f"unknown joint kind {entry['kind']!r} on joint {name}") from None
        axis = _float_list(entry["axis"], 3, f"axis of joint {name}")
        limits = _float_list(entry["limits"], 2, f"limits of joint {name}")
        implemented = entry.get("implemented", True)
        if not isinstance(implemented, bool):
            raise ModelError(f"implemented must be a boolean on joint {name}")
        joints.append(
            JointSpec(
                name=str(entry["name"]),
                kind=kind,
                axis=(axis[0], axis[1], axis[2]),
                limits=(limits[0], limits[1]),
                home=_float(entry["home"], f"home of joint {name}"),
                implemented=implemented,
            )
        )

    if not isinstance(doc["links"], list):
        raise ModelError("links must be a list")
    links = []
    for entry in doc["links"]:
        entry = _require_mapping(entry, "link entry")
        name = entry.get("name", "<unnamed>")
        _check_keys(entry, _LINK_KEYS, _LINK_REQUIRED, f"link {name}")
        links.append(
            LinkSpec(
                name=str(entry["name"]),
                length=_float(entry["length"], f"length of link {name}"),
                mass=_float(entry["mass"], f"mass of link {name}"),
                motor_mass=_float(entry["motorMass"], f"motorMass of link {name}"),
                motor_torque_limit=_float(
                    entry["motorTorqueLimit"], f"motorTorqueLimit of link {name}"
                ),
                motor=str(entry.get("motor", "")),
            )
        )

    base_pivot = Pose.identity()
    if "basePivot" in doc:
        bp = _require_mapping(doc["basePivot"], "basePivot")
        _check_keys(bp, {"position", "rotation"}, {"position", "rotation"}, "basePivot")
        rows = bp["rotation"]
        if not isinstance(rows, list) or len(rows) != 3:
            raise ModelError("basePivot.rotation must be a 3x3 matrix")
        rotation = [_float_list(r, 3, "basePivot.rotation row") for r in rows]
        base_pivot = Pose(
            position=np.array(_float_list(bp["position"], 3, "basePivot.position")),
            rotation=np.array(rotation),
        )

    named_poses: dict[str, tuple[float, ...]] = {}
    if "poses" in doc:
        poses = _require_mapping(doc["poses"], "poses")
        for k, v in poses.items():
            named_poses[str(k)] = tuple(_float_list(v, len(joints), f"pose {k}"))

    expand_macro: tuple[Keyframe, ...] = ()
    if "expandMacro" in doc:
        if not isinstance(doc["expandMacro"], list):
            raise ModelError("expandMacro must be a list")
        frames = []
        for k, entry in enumerate(doc["expandMacro"]):
            entry = _require_mapping(entry, f"expand keyframe {k}")
            _check_keys(entry, {"values", "dwell"}, {"values"}, f"expand keyframe {k}")
            frames.append(
                Keyframe(
                    values=tuple(_float_list(entry["values"], len(joints), f"keyframe {k}")),
                    dwell=_float(entry.get("dwell", 0.0), f"dwell of keyframe {k}"),
                )
            )
        expand_macro = tuple(frames)

    model = KinematicModel(
        joints=tuple(joints),
        links=tuple(links),
        scissor=scissor,
        gripper_length=_float(doc["gripperLength"], "gripperLength"),
        base_pivot=base_pivot,
        named_poses=named_poses,
        expand_macro=expand_macro,
    )
    validate_model(model)
    return model


def with_torque_limits(model: KinematicModel, limits: dict[str, float]) -> KinematicModel:
    """Copy of the model with per-link torque limits replaced (statics what-ifs)."""
    links = tuple(
        replace(l, motor_torque_limit=limits.get(l.name, l.motor_torque_limit))
        for l in model.links
    )
    return replace(model, links=links)
