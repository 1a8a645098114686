"""Command-line front end: batch analysis plus the teleop service.

Exit codes: 0 ok, 2 usage or config error, 3 write failure, 4 IK did not
converge.  All output uses fixed decimal formatting (3 places for mm, 4 for
radians and ratios) so runs are byte-reproducible.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import workspace as ws
from .geometry import Pose
from .kinematics import IkRequest, forward_kinematics, reach, solve_ik
from .model import (
    JointKind,
    KinematicModel,
    ModelError,
    default_model,
    home_state,
    load_model,
    straight_state,
)
from .scissor import extension_range, extension_ratio
from .statics import GRAVITY_DEFAULT, max_payload
from .teleop import make_session

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_IK = 4


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _resolve_model(args) -> KinematicModel:
    path = args.model or os.environ.get("AUGLIMB_MODEL")
    if not path:
        return default_model()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ModelError(f"cannot read model config {path!r}: {exc}") from exc
    return load_model(text)


def _named_state(model: KinematicModel, name: str, extension: float | None):
    if name in ("straight", "horizontal-straight"):
        return straight_state(model, extension)
    if name == "straight-retracted":
        lo = model.joints[model.extension_index()].limits[0]
        return straight_state(model, extension if extension is not None else lo)
    if name == "home":
        state = home_state(model)
    elif name in model.named_poses:
        state = np.array(model.named_poses[name], dtype=float)
    else:
        raise ModelError(f"unknown pose {name!r}")
    if extension is not None:
        state[model.extension_index()] = extension
    return state


def _parse_floats(text: str, n: int, what: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise ModelError(f"{what} needs {n} comma-separated numbers")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise ModelError(f"{what}: {exc}") from exc


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------


def cmd_report(args) -> int:
    model = _resolve_model(args)
    dof = sum(1 for j in model.joints if j.kind is not JointKind.PRISMATIC_SCISSOR)
    ext = model.joints[model.extension_index()]
    straight = straight_state(model, None)
    reach_base = reach(model, straight)
    reach_tool = reach(model, straight, include_gripper=True)
    ratio = extension_ratio(model.scissor)
    multiple = reach_base / 250.0
    mass = model.total_mass()
    if args.json:
        print(
            json.dumps(
                {
                    "dofCount": dof,
                    "extensionUnits": 1,
                    "extensionRangeMm": [ext.limits[0], ext.limits[1]],
                    "extensionRatio": ratio,
                    "maxReachMm": {"toolBase": reach_base, "tool": reach_tool},
                    "forearmMultiple": multiple,
                    "massGrams": mass,
                },
                indent=2,
            )
        )
        return EXIT_OK
    print(f"dof = {dof} (+1 extension unit)")
    print(f"extensionRange = [{ext.limits[0]:.3f}, {ext.limits[1]:.3f}] mm")
    print(f"extensionRatio = {ratio:.4f}")
    print(f"maxReach.toolBase = {reach_base:.3f} mm")
    print(f"maxReach.tool = {reach_tool:.3f} mm")
    print(f"forearmMultiple = {multiple:.4f}")
    print(f"mass = {mass:.0f} g")
    return EXIT_OK


# ---------------------------------------------------------------------------
# workspace
# ---------------------------------------------------------------------------


def cmd_workspace(args) -> int:
    model = _resolve_model(args)
    plan = ws.SamplingPlan(
        sample_count=args.samples,
        scheme=args.scheme,
        seed=args.seed,
        include_gripper=args.include_gripper,
        deterministic_extremes=args.extremes,
        voxel_size=args.voxel,
    )
    cloud, report = ws.sample_workspace(model, plan)
    data = ws.export_point_cloud(cloud, args.format)
    try:
        with open(args.output, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        return _fail(EXIT_IO, f"cannot write point cloud to {args.output!r}: {exc}")
    report_text = json.dumps(report.to_dict(), indent=2)
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(report_text + "\n")
        except OSError as exc:
            return _fail(EXIT_IO, f"cannot write report to {args.report!r}: {exc}")
    else:
        print(report_text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# fk / ik
# ---------------------------------------------------------------------------


def cmd_fk(args) -> int:
    model = _resolve_model(args)
    if args.joints:
        state = np.array(
            _parse_floats(args.joints, model.n_joints, "--joints"), dtype=float
        )
    else:
        state = _named_state(model, args.state, args.extension)
    frames = forward_kinematics(model, state)
    base = model.base_pivot.position
    if args.json:
        print(
            json.dumps(
                {
                    name: {
                        "position": [float(v) for v in pose.position],
                        "distance": float(np.linalg.norm(pose.position - base)),
                    }
                    for name, pose in frames.items()
                },
                indent=2,
            )
        )
        return EXIT_OK
    for name in ("toolBase", "tool"):
        p = frames[name].position
        d = float(np.linalg.norm(p - base))
        print(
            f"{name}.position = [{p[0]:.3f}, {p[1]:.3f}, {p[2]:.3f}] mm"
            f"  distance = {d:.3f} mm"
        )
    return EXIT_OK


def cmd_ik(args) -> int:
    model = _resolve_model(args)
    pos = _parse_floats(args.target_pos, 3, "--target-pos")
    if args.target_rot:
        rot = np.array(_parse_floats(args.target_rot, 9, "--target-rot")).reshape(3, 3)
        orientation_weight = args.rot_weight
    else:
        rot = np.eye(3)
        orientation_weight = 0.0  # position-only solve
    seed = _named_state(model, args.seed_state, None)
    req = IkRequest(
        target=Pose(np.array(pos), rot),
        seed=seed,
        frame=args.frame,
        orientation_weight=orientation_weight,
        damping=args.damping,
        max_iterations=args.max_iterations,
        pos_tol=args.pos_tol,
        rot_tol=args.rot_tol,
    )
    result = solve_ik(model, req)
    out = {
        "converged": result.converged,
        "iterations": result.iterations,
        "posResidualMm": result.pos_residual,
        "rotResidualRad": result.rot_residual,
        "joints": {
            j.name: float(v) for j, v in zip(model.joints, result.state)
        },
    }
    if args.json:
        print(json.dumps(out, indent=2))
    else:
        for j, v in zip(model.joints, result.state):
            unit = "mm" if j.kind is JointKind.PRISMATIC_SCISSOR else "rad"
            value = f"{v:.3f}" if unit == "mm" else f"{v:.4f}"
            print(f"{j.name} = {value} {unit}")
        print(f"iterations = {result.iterations}")
        print(f"posResidual = {result.pos_residual:.3f} mm")
        print(f"rotResidual = {result.rot_residual:.4f} rad")
    if not result.converged:
        print(
            f"ik did not converge: position residual {result.pos_residual:.3f} mm",
            file=sys.stderr,
        )
        return EXIT_IK
    return EXIT_OK


# ---------------------------------------------------------------------------
# payload / serve
# ---------------------------------------------------------------------------


def cmd_payload(args) -> int:
    model = _resolve_model(args)
    state = _named_state(model, args.pose, args.extension)
    report = max_payload(model, state, gravity=GRAVITY_DEFAULT)
    if args.json:
        print(
            json.dumps(
                {
                    "maxPayloadGrams": report.max_payload,
                    "bindingJoint": report.binding_joint,
                    "limitsNote": report.limits_note,
                    "rows": [
                        {
                            "joint": r.joint,
                            "gravityLoad": r.gravity_load,
                            "payloadLoad": r.payload_load,
                            "limit": r.limit,
                            "margin": r.margin,
                            "unit": r.unit,
                        }
                        for r in report.rows
                    ],
                },
                indent=2,
            )
        )
        return EXIT_OK
    print(f"{'joint':<12}{'gravity':>12}{'payload':>12}{'limit':>12}{'margin':>12}  unit")
    for r in report.rows:
        print(
            f"{r.joint:<12}{r.gravity_load:>12.3f}{r.payload_load:>12.3f}"
            f"{r.limit:>12.3f}{r.margin:>12.3f}  {r.unit}"
        )
    print(f"maxPayload = {report.max_payload:.3f} g")
    print(f"bindingJoint = {report.binding_joint}")
    print(report.limits_note)
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import serve

    model = _resolve_model(args)
    session = make_session(model, tick_rate=args.tick_rate)
    print(f"teleop service on ws://{args.host}:{args.port}/ws (tick {args.tick_rate} Hz)")
    serve(session, host=args.host, port=args.port, static_dir=args.ui)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="auglimb",
        description="Kinematics, workspace, payload and teleop simulator for the AugLimb robotic limb.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model(p):
        p.add_argument(
            "--model",
            default=None,
            help="model config path (default: built-in model; env AUGLIMB_MODEL)",
        )

    p = sub.add_parser("report", help="model summary: DOFs, reach, ratio, mass")
    add_model(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("workspace", help="sample the reachable workspace")
    add_model(p)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheme", choices=ws.SCHEMES, default="uniform-random")
    p.add_argument("--format", choices=("csv", "ply"), default="csv")
    p.add_argument("--output", default="workspace.csv", help="point cloud path")
    p.add_argument("--report", default=None, help="reach report path (default: stdout)")
    p.add_argument("--voxel", type=float, default=10.0, help="voxel size mm for volume")
    p.add_argument(
        "--extremes",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="inject the straight max-extension configuration",
    )
    p.add_argument(
        "--include-gripper",
        action=argparse.BooleanOptionalAction,
        default=False,
        help="measure the gripper tip instead of the extension tip",
    )
    p.add_argument("--no-gripper", dest="include_gripper", action="store_false")
    p.set_defaults(func=cmd_workspace)

    p = sub.add_parser("fk", help="forward kinematics of a named or raw state")
    add_model(p)
    p.add_argument("--state", default="straight", help="straight | compact | home | <named pose>")
    p.add_argument("--extension", type=float, default=None)
    p.add_argument("--joints", default=None, help="raw comma-separated joint values")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_fk)

    p = sub.add_parser("ik", help="damped-least-squares inverse kinematics")
    add_model(p)
    p.add_argument("--target-pos", required=True, help="x,y,z in mm")
    p.add_argument("--target-rot", default=None, help="row-major 3x3, 9 numbers")
    p.add_argument("--frame", default="tool", help="tool | toolBase | joint name")
    p.add_argument("--seed-state", default="home")
    p.add_argument("--damping", type=float, default=2.0)
    p.add_argument("--rot-weight", type=float, default=100.0)
    p.add_argument("--max-iterations", type=int, default=200)
    p.add_argument("--pos-tol", type=float, default=1e-3)
    p.add_argument("--rot-tol", type=float, default=1e-4)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_ik)

    p = sub.add_parser("payload", help="gravity torques and maximum tip payload")
    add_model(p)
    p.add_argument(
        "--pose", default="horizontal-straight", help="horizontal-straight | compact | home"
    )
    p.add_argument("--extension", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_payload)

    p = sub.add_parser("serve", help="run the teleop websocket service")
    add_model(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8720)
    p.add_argument("--tick-rate", type=float, default=50.0)
    p.add_argument("--ui", default=None, help="static frontend directory to serve at /")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "samples", None) is not None and args.samples < 1:
        return _fail(EXIT_USAGE, "usage error: --samples must be >= 1")
    try:
        return args.func(args)
    except ModelError as exc:
        return _fail(EXIT_USAGE, f"config error: {exc}")
    except ValueError as exc:
        return _fail(EXIT_USAGE, f"usage error: {exc}")


if __name__ == "__main__":
    sys.exit(main())
