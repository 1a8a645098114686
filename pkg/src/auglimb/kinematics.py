"""Forward kinematics, geometric Jacobian and damped-least-squares IK.

Frames are returned world-from-frame.  The frame map contains one entry per
joint (at the joint origin, with the joint's motion applied), plus "toolBase"
(the extension tip) and "tool" (toolBase advanced by the gripper length).

Jacobian columns follow the implemented pose-affecting joints in model order;
the gripper aperture never appears.  Rows are linear velocity (mm per unit
joint rate) stacked over angular velocity (rad per unit joint rate).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import Pose, axis_angle_from_matrix, rotation_about_axis
from .model import JointKind, JointState, KinematicModel, clamp_state, state_in_limits

_X = np.array([1.0, 0.0, 0.0])


class IkNumericalError(RuntimeError):
    """Damped-least-squares step failed (singular normal matrix)."""


@dataclass
class _Chain:
    """Propagated chain data for one state."""

    origins: list[np.ndarray]  # joint origin, before the joint's motion
    axes: list[np.ndarray]  # joint axis in world coordinates
    frames: dict[str, Pose]
    mass_points: list[tuple[int, np.ndarray, float]]  # (link index, position, grams)
    tool_direction: np.ndarray


def _propagate(model: KinematicModel, values: np.ndarray) -> _Chain:
    p = model.base_pivot.position.astype(float).copy()
    rot = model.base_pivot.rotation.astype(float).copy()
    origins, axes = [], []
    frames: dict[str, Pose] = {}
    mass_points: list[tuple[int, np.ndarray, float]] = []
    for i, (joint, link, q) in enumerate(zip(model.joints, model.links, values)):
        axis_local = np.asarray(joint.axis)
        origins.append(p.copy())
        axes.append(rot @ axis_local)
        if joint.kind in (JointKind.REVOLUTE_TWIST, JointKind.REVOLUTE_HINGE):
            rot = rot @ rotation_about_axis(axis_local, q)
        elif joint.kind is JointKind.PRISMATIC_SCISSOR:
            p = p + (rot @ axis_local) * q
        # gripper aperture does not move the chain
        frames[joint.name] = Pose(p.copy(), rot.copy())
        if joint.kind is JointKind.PRISMATIC_SCISSOR:
            frames["toolBase"] = Pose(p.copy(), rot.copy())
        if link.motor_mass > 0:
            mass_points.append((i, p.copy(), link.motor_mass))
        if link.mass > 0:
            mass_points.append((i, p + rot @ (_X * (link.length / 2.0)), link.mass))
        p = p + rot @ (_X * link.length)
    if "toolBase" not in frames:  # chain without an extension unit
        frames["toolBase"] = Pose(p.copy(), rot.copy())
    tool_dir = rot @ _X
    frames["tool"] = Pose(p + tool_dir * model.gripper_length, rot.copy())
    return _Chain(origins, axes, frames, mass_points, tool_dir)


def _check_state(model: KinematicModel, state, strict: bool) -> np.ndarray:
    values = np.asarray(state, dtype=float)
    if values.shape != (model.n_joints,):
        raise ValueError(
            f"state has shape {values.shape}, model has {model.n_joints} joints"
        )
    if strict and not state_in_limits(model, values):
        raise ValueError("state outside joint limits")
    return values


def forward_kinematics(
    model: KinematicModel, state, strict: bool = False
) -> dict[str, Pose]:
    """Pose of every joint frame plus the extension tip and gripper tip."""
    values = _check_state(model, state, strict)
    return _propagate(model, values).frames


def chain_mass_points(model: KinematicModel, state) -> list[tuple[np.ndarray, float]]:
    """Lumped mass locations (mm) and values (g) at the given state."""
    values = _check_state(model, state, strict=False)
    return [(pos, grams) for _, pos, grams in _propagate(model, values).mass_points]


def joint_origins_axes(
    model: KinematicModel, state
) -> tuple[list[np.ndarray], list[np.ndarray]]:
    values = _check_state(model, state, strict=False)
    chain = _propagate(model, values)
    return chain.origins, chain.axes


def _frame_order(model: KinematicModel, frame: str) -> int:
    """Highest joint index whose motion can affect the frame."""
    if frame == "tool":
        return model.n_joints - 1
    if frame == "toolBase":
        try:
            return model.extension_index()
        except KeyError:
            return model.n_joints - 1
    return model.joint_index(frame)


def geometric_jacobian(model: KinematicModel, state, frame: str = "tool") -> np.ndarray:
    """6 x k geometric Jacobian of the named frame (linear rows over angular)."""
    values = _check_state(model, state, strict=False)
    chain = _propagate(model, values)
    if frame not in chain.frames:
        raise KeyError(f"unknown frame {frame!r}")
    p_f = chain.frames[frame].position
    last = _frame_order(model, frame)
    cols = []
    for i in model.pose_joint_indices():
        joint = model.joints[i]
        col = np.zeros(6)
        if i <= last:
            if joint.kind is JointKind.PRISMATIC_SCISSOR:
                col[:3] = chain.axes[i]
            else:
                w = chain.axes[i]
                col[:3] = np.cross(w, p_f - chain.origins[i])
                col[3:] = w
        cols.append(col)
    return np.column_stack(cols) if cols else np.zeros((6, 0))


def reach(model: KinematicModel, state, include_gripper: bool = False) -> float:
    """Distance (mm) from the base pivot origin to the extension tip or gripper tip."""
    frames = forward_kinematics(model, state)
    tip = frames["tool" if include_gripper else "toolBase"].position
    return float(np.linalg.norm(tip - model.base_pivot.position))


# ---------------------------------------------------------------------------
# Inverse kinematics
# ---------------------------------------------------------------------------


@dataclass
class IkRequest:
    target: Pose
    seed: JointState
    frame: str = "tool"
    position_weight: float = 1.0
    orientation_weight: float = 100.0  # balances rad against mm in the step
    damping: float = 2.0
    max_iterations: int = 200
    pos_tol: float = 1e-3  # mm
    rot_tol: float = 1e-4  # rad

    def __post_init__(self):
        if self.pos_tol <= 0 or self.rot_tol <= 0:
            raise ValueError("posTol and rotTol must be > 0")
        if self.max_iterations < 1:
            raise ValueError("maxIterations must be >= 1")
        if self.position_weight < 0 or self.orientation_weight < 0:
            raise ValueError("weights must be nonnegative")
        if self.damping < 0:
            raise ValueError("damping must be nonnegative")


@dataclass
class IkResult:
    state: JointState
    iterations: int
    pos_residual: float  # mm
    rot_residual: float  # rad
    converged: bool


def solve_ik(model: KinematicModel, req: IkRequest) -> IkResult:
    """Damped least squares: dq = Jw^T (Jw Jw^T + lambda^2 I)^-1 e per iteration.

    The error 6-vector stacks weighted position (mm) and axis-angle orientation
    (rad) mismatch; joints are clamped to limits after every step and
    unimplemented joints never move.  Convergence requires the unweighted
    residuals to pass posTol and rotTol; a zero orientation weight drops the
    orientation residual from both the step and the convergence test.

    The request's damping caps an error-proportional term
    (lambda_eff^2 = min(lambda^2, ||e_w||^2 / 2)), so steps stay damped far
    from the target or near a singularity (where the residual cannot shrink)
    but approach the Gauss-Newton step close to the solution.
    """
    q = np.asarray(req.seed, dtype=float).copy()
    if q.shape != (model.n_joints,):
        raise ValueError(
            f"seed has shape {q.shape}, model has {model.n_joints} joints"
        )
    if not state_in_limits(model, q):
        raise ValueError("seed outside joint limits")
    cols = model.pose_joint_indices()
    weight = np.concatenate(
        [np.full(3, req.position_weight), np.full(3, req.orientation_weight)]
    )
    lam2 = req.damping * req.damping
    use_rot = req.orientation_weight > 0.0

    best_q = q.copy()
    best_res = (np.inf, np.inf)
    best_score = np.inf
    iterations = 0
    for it in range(req.max_iterations + 1):
        frames = forward_kinematics(model, q)
        if req.frame not in frames:
            raise KeyError(f"unknown frame {req.frame!r}")
        pose = frames[req.frame]
        e = np.zeros(6)
        e[:3] = req.target.position - pose.position
        e[3:] = axis_angle_from_matrix(req.target.rotation @ pose.rotation.T)
        pos_res = float(np.linalg.norm(e[:3]))
        rot_res = float(np.linalg.norm(e[3:]))
        score = float(np.linalg.norm(weight * e))
        if score < best_score:
            best_score, best_q, best_res = score, q.copy(), (pos_res, rot_res)
        iterations = it
        if pos_res <= req.pos_tol and (not use_rot or rot_res <= req.rot_tol):
            return IkResult(q, it, pos_res, rot_res, converged=True)
        if it == req.max_iterations:
            break
        jac = geometric_jacobian(model, q, req.frame)
        jw = weight[:, None] * jac
        ew = weight * e
        lam2_eff = min(lam2, 0.5 * float(ew @ ew))
        try:
            y = np.linalg.solve(jw @ jw.T + lam2_eff * np.eye(6), ew)
        except np.linalg.LinAlgError as exc:
            if lam2_eff >= lam2:  # no damping headroom left
                raise IkNumericalError(
                    f"DLS normal matrix is singular (damping {req.damping})"
                ) from exc
            y = np.linalg.solve(jw @ jw.T + lam2 * np.eye(6), ew)
        dq = jw.T @ y
        q[cols] = q[cols] + dq
        q = clamp_state(model, q)
    return IkResult(best_q, iterations, best_res[0], best_res[1], converged=False)


# ---------------------------------------------------------------------------
# Vectorized tip positions for workspace sampling
# ---------------------------------------------------------------------------


def _rotations_about_axis(axis, angles: np.ndarray) -> np.ndarray:
    ax = np.asarray(axis, dtype=float)
    k = np.array(
        [
            [0.0, -ax[2], ax[1]],
            [ax[2], 0.0, -ax[0]],
            [-ax[1], ax[0], 0.0],
        ]
    )
    kk = k @ k
    s = np.sin(angles)[:, None, None]
    c = (1.0 - np.cos(angles))[:, None, None]
    return np.eye(3)[None, :, :] + s * k[None, :, :] + c * kk[None, :, :]


def batch_tip_positions(
    model: KinematicModel, states: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(toolBase, tool) positions, each (N, 3), for an (N, n_joints) state matrix.

    Identical to forward_kinematics per row; exists so workspace sampling can
    process millions of states without a Python-level loop.
    """
    states = np.asarray(states, dtype=float)
    if states.ndim != 2 or states.shape[1] != model.n_joints:
        raise ValueError(f"states must be (N, {model.n_joints})")
    n = states.shape[0]
    p = np.broadcast_to(model.base_pivot.position, (n, 3)).copy()
    rot = np.broadcast_to(model.base_pivot.rotation, (n, 3, 3)).copy()
    tool_base = None
    for i, (joint, link) in enumerate(zip(model.joints, model.links)):
        axis = np.asarray(joint.axis)
        q = states[:, i]
        if joint.kind in (JointKind.REVOLUTE_TWIST, JointKind.REVOLUTE_HINGE):
            rot = np.einsum("nij,njk->nik", rot, _rotations_about_axis(axis, q))
        elif joint.kind is JointKind.PRISMATIC_SCISSOR:
            p = p + (rot @ axis) * q[:, None]
            tool_base = p.copy()
        if link.length != 0.0:
            p = p + rot[:, :, 0] * link.length
    if tool_base is None:
        tool_base = p.copy()
    tool = p + rot[:, :, 0] * model.gripper_length
    return tool_base, tool
