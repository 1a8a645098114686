"""Wizard-of-Oz teleoperation session: a tick-based state machine.

One writer (the tick loop) advances the session; commands are applied between
ticks in arrival order.  Every tick moves each joint toward its target by at
most rate_limit / tick_rate, clamps to limits, and emits a state update with
the tip pose and reach.  Joints marked unimplemented never move.

Wire protocol (JSON text frames over a websocket):
  client -> server: jog {joint, target}, poseTarget {position[3], rotation[9]},
                    macro {name}, stop {}
  server -> client: model {...} hello, state {t, joints, tipPose, reach, mode,
                    macroProgress}, error {code, detail},
                    ikFailed {posResidual, rotResidual}
All numbers are mm and radians.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import Pose
from .kinematics import IkRequest, forward_kinematics, solve_ik
from .model import JointKind, Keyframe, KinematicModel, clamp_state

MODE_IDLE = "idle"
MODE_JOGGING = "jogging"
MODE_IK_TRACKING = "ik-tracking"
MODE_MACRO = "macro-running"

DEFAULT_TICK_RATE = 50.0  # Hz
DEFAULT_REVOLUTE_RATE = math.radians(60.0)  # rad/s
DEFAULT_PRISMATIC_RATE = 40.0  # mm/s


@dataclass(frozen=True)
class TransformMacro:
    name: str  # "expand" or "collapse"
    keyframes: tuple[Keyframe, ...]

    def __post_init__(self):
        if len(self.keyframes) < 2:
            raise ValueError("a transform macro needs at least 2 keyframes")


def expand_macro(model: KinematicModel) -> TransformMacro:
    return TransformMacro("expand", model.expand_macro)


def collapse_macro(model: KinematicModel) -> TransformMacro:
    return TransformMacro("collapse", tuple(reversed(model.expand_macro)))


def default_rate_limits(model: KinematicModel) -> np.ndarray:
    return np.array(
        [
            DEFAULT_PRISMATIC_RATE
            if j.kind is JointKind.PRISMATIC_SCISSOR
            else DEFAULT_REVOLUTE_RATE
            for j in model.joints
        ]
    )


@dataclass
class Session:
    model: KinematicModel
    current: np.ndarray
    targets: np.ndarray
    rate_limits: np.ndarray
    tick_rate: float = DEFAULT_TICK_RATE
    mode: str = MODE_IDLE
    macro: TransformMacro | None = None
    macro_index: int = 0  # keyframe currently being driven to
    macro_progress: float = 0.0
    dwell_ticks_left: int = 0
    tick_count: int = 0


def make_session(
    model: KinematicModel,
    start_state=None,
    tick_rate: float = DEFAULT_TICK_RATE,
    rate_limits=None,
) -> Session:
    """New idle session; starts at the model's compact pose when one is defined."""
    if tick_rate <= 0:
        raise ValueError("tickRate must be > 0")
    if start_state is None:
        start = model.named_poses.get("compact")
        start_state = start if start is not None else [j.home for j in model.joints]
    current = clamp_state(model, np.asarray(start_state, dtype=float))
    limits = (
        np.asarray(rate_limits, dtype=float)
        if rate_limits is not None
        else default_rate_limits(model)
    )
    if limits.shape != (model.n_joints,) or np.any(limits <= 0):
        raise ValueError("rate limits must be positive, one per joint")
    return Session(
        model=model,
        current=current,
        targets=current.copy(),
        rate_limits=limits,
        tick_rate=tick_rate,
    )


def _set_targets(session: Session, values) -> None:
    session.targets = clamp_state(session.model, np.asarray(values, dtype=float))


def tick(session: Session) -> dict:
    """Advance one tick and return the state-update message."""
    step = session.rate_limits / session.tick_rate
    cur, tgt = session.current, session.targets
    for i in range(session.model.n_joints):
        d = tgt[i] - cur[i]
        if abs(d) <= step[i]:
            cur[i] = tgt[i]  # exact arrival, no overshoot
        else:
            cur[i] += math.copysign(step[i], d)
    at_target = bool(np.array_equal(cur, tgt))

    if session.mode == MODE_MACRO and at_target:
        if session.dwell_ticks_left > 0:
            session.dwell_ticks_left -= 1
        else:
            last = len(session.macro.keyframes) - 1
            if session.macro_index >= last:
                session.mode = MODE_IDLE
                session.macro_progress = 1.0
            else:
                session.macro_index += 1
                kf = session.macro.keyframes[session.macro_index]
                _set_targets(session, kf.values)
                session.dwell_ticks_left = int(
                    math.ceil(kf.dwell * session.tick_rate)
                )
                session.macro_progress = session.macro_index / last
    elif session.mode in (MODE_JOGGING, MODE_IK_TRACKING) and at_target:
        session.mode = MODE_IDLE

    session.tick_count += 1
    return state_message(session)


def state_message(session: Session) -> dict:
    frames = forward_kinematics(session.model, session.current)
    tip = frames["tool"]
    return {
        "type": "state",
        "t": session.tick_count / session.tick_rate,
        "joints": [float(v) for v in session.current],
        "tipPose": {
            "position": [float(v) for v in tip.position],
            "rotation": [float(v) for v in tip.rotation.reshape(9)],
        },
        "reach": float(
            np.linalg.norm(tip.position - session.model.base_pivot.position)
        ),
        "mode": session.mode,
        "macroProgress": session.macro_progress,
    }


def model_message(session: Session) -> dict:
    """Server hello: the geometry a client needs to draw the limb."""
    m = session.model
    return {
        "type": "model",
        "joints": [
            {
                "name": j.name,
                "kind": j.kind.value,
                "axis": list(j.axis),
                "limits": [j.limits[0], j.limits[1]],
                "home": j.home,
                "implemented": j.implemented,
            }
            for j in m.joints
        ],
        "links": [{"name": l.name, "length": l.length} for l in m.links],
        "scissor": {
            "stages": m.scissor.stages,
            "halfLink": m.scissor.half_link,
            "hingeOffset": m.scissor.hinge_offset,
            "layers": m.scissor.layers,
            "thetaRange": list(m.scissor.theta_range),
        },
        "gripperLength": m.gripper_length,
        "tickRate": session.tick_rate,
    }


def _error(code: str, detail: str) -> dict:
    return {"type": "error", "code": code, "detail": detail}


def command(session: Session, msg) -> dict | None:
    """Apply one client message; returns a reply message or None."""
    if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
        return _error("badMessage", "message must be an object with a string 'type'")
    kind = msg["type"]
    if kind == "jog":
        return _cmd_jog(session, msg)
    if kind == "poseTarget":
        return _cmd_pose_target(session, msg)
    if kind == "macro":
        return _cmd_macro(session, msg)
    if kind == "stop":
        session.targets = session.current.copy()
        session.mode = MODE_IDLE
        session.macro = None
        session.macro_progress = 0.0
        return None
    return _error("badMessage", f"unknown message type {kind!r}")


def _cmd_jog(session: Session, msg: dict) -> dict | None:
    name = msg.get("joint")
    target = msg.get("target")
    if not isinstance(name, str) or not isinstance(target, (int, float)) or isinstance(target, bool):
        return _error("badMessage", "jog needs a joint name and a numeric target")
    try:
        i = session.model.joint_index(name)
    except KeyError:
        return _error("unknownJoint", f"no joint named {name!r}")
    joint = session.model.joints[i]
    if not joint.implemented:
        value = joint.home  # locked out in the prototype
    else:
        value = min(joint.limits[1], max(joint.limits[0], float(target)))
    # a jog overrides a running macro (operator takes over)
    session.macro = None
    session.targets[i] = value
    session.mode = MODE_JOGGING
    return None


def _cmd_pose_target(session: Session, msg: dict) -> dict | None:
    pos = msg.get("position")
    rot = msg.get("rotation")
    if not _is_numbers(pos, 3) or not _is_numbers(rot, 9):
        return _error("badMessage", "poseTarget needs position[3] and rotation[9]")
    target = Pose(np.array(pos, dtype=float), np.array(rot, dtype=float).reshape(3, 3))
    try:
        target.validate()
    except ValueError as exc:
        return _error("badMessage", f"invalid rotation: {exc}")
    result = solve_ik(
        session.model, IkRequest(target=target, seed=session.current.copy())
    )
    if not result.converged:
        return {
            "type": "ikFailed",
            "posResidual": result.pos_residual,
            "rotResidual": result.rot_residual,
        }
    session.macro = None
    _set_targets(session, result.state)
    session.mode = MODE_IK_TRACKING
    return None


def _cmd_macro(session: Session, msg: dict) -> dict | None:
    name = msg.get("name")
    if session.mode == MODE_MACRO:
        return _error("busy", "a transform macro is already running")
    if name == "expand":
        macro = expand_macro(session.model) if session.model.expand_macro else None
    elif name == "collapse":
        macro = collapse_macro(session.model) if session.model.expand_macro else None
    else:
        return _error("badMessage", f"unknown macro {name!r}")
    if macro is None:
        return _error("noMacro", "this model defines no transform macro")
    session.macro = macro
    session.macro_index = 0
    session.macro_progress = 0.0
    kf = macro.keyframes[0]
    _set_targets(session, kf.values)
    session.dwell_ticks_left = int(math.ceil(kf.dwell * session.tick_rate))
    session.mode = MODE_MACRO
    return None


def _is_numbers(obj, n: int) -> bool:
    return (
        isinstance(obj, (list, tuple))
        and len(obj) == n
        and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj)
    )
