"""Sampling-based reachable-workspace analysis and point-cloud export.

Random draws are counter-based (splitmix64 keyed on seed, sample index and
joint index), so a cloud is bit-reproducible, independent of any partitioning
of the index range, and sample sets are nested as the count grows.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .kinematics import batch_tip_positions, forward_kinematics
from .model import FOREARM_LENGTH_MM, KinematicModel, straight_state

SCHEMES = ("uniform-random", "low-discrepancy", "grid")

_HALTON_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@dataclass(frozen=True)
class SamplingPlan:
    sample_count: int
    scheme: str = "uniform-random"
    seed: int = 0
    include_gripper: bool = False
    deterministic_extremes: bool = True  # always inject the straight configuration
    voxel_size: float = 10.0

    def __post_init__(self):
        if self.sample_count < 1:
            raise ValueError(f"sampleCount must be >= 1, got {self.sample_count}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; choose from {SCHEMES}")
        if self.voxel_size <= 0:
            raise ValueError("voxelSize must be > 0")


@dataclass(frozen=True)
class ReachReport:
    max_reach: float  # mm
    min_reach: float  # mm
    volume_estimate: float  # mm^3, voxel occupancy
    forearm_multiple: float  # max_reach / 250
    sample_count: int
    voxel_size: float
    include_gripper: bool

    def to_dict(self) -> dict:
        return {
            "maxReach": self.max_reach,
            "minReach": self.min_reach,
            "volumeEstimate": self.volume_estimate,
            "forearmMultiple": self.forearm_multiple,
            "sampleCount": self.sample_count,
            "voxelSize": self.voxel_size,
            "includeGripper": self.include_gripper,
        }


@dataclass(frozen=True)
class PointCloud:
    points: np.ndarray  # (N, 3) mm
    reach: np.ndarray  # (N,) mm from the base pivot


@dataclass(frozen=True)
class CompactEnvelope:
    box_min: tuple[float, float, float]
    box_max: tuple[float, float, float]
    max_protrusion: float  # mm, radial from the upper-arm mount axis


_U64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def _mix_u64(x: int) -> int:
    x = (x + _GAMMA) & _U64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _U64
    return x ^ (x >> 31)


def _uniform01(seed: int, indices: np.ndarray, joint: int) -> np.ndarray:
    key = _mix_u64((seed & _U64) + _GAMMA * (joint + 1) & _U64)
    with np.errstate(over="ignore"):  # uint64 mixing wraps by design
        x = np.uint64(key) + indices.astype(np.uint64) * np.uint64(_GAMMA)
        x = (x + np.uint64(_GAMMA)).astype(np.uint64)
        x = (x ^ (x >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        x = (x ^ (x >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        x = x ^ (x >> np.uint64(31))
    return (x >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def _halton(indices: np.ndarray, base: int) -> np.ndarray:
    out = np.zeros(indices.shape, dtype=np.float64)
    f = 1.0
    i = indices.astype(np.int64) + 1  # skip the all-zero first point
    while np.any(i > 0):
        f /= base
        out += f * (i % base)
        i //= base
    return out


def _unit_samples(plan: SamplingPlan, count: int, dims: int) -> np.ndarray:
    """(count, dims) points in [0, 1], scheme- and index-deterministic."""
    idx = np.arange(count)
    if plan.scheme == "uniform-random":
        return np.column_stack([_uniform01(plan.seed, idx, j) for j in range(dims)])
    if plan.scheme == "low-discrepancy":
        if dims > len(_HALTON_BASES):
            raise ValueError(f"low-discrepancy supports up to {len(_HALTON_BASES)} joints")
        return np.column_stack([_halton(idx, _HALTON_BASES[j]) for j in range(dims)])
    # grid: row-major lattice with endpoints included
    m = max(2, int(np.ceil(count ** (1.0 / dims)))) if count > 1 else 1
    coords = []
    rem = idx.copy()
    for _ in range(dims):
        coords.append(rem % m)
        rem = rem // m
    if m == 1:
        return np.full((count, dims), 0.5)
    return np.column_stack([c / (m - 1) for c in coords])


def sample_workspace(
    model: KinematicModel, plan: SamplingPlan
) -> tuple[PointCloud, ReachReport]:
    """Draw joint states per the plan, run FK, and aggregate reach statistics."""
    sampled = model.pose_joint_indices()
    lo = np.array([model.joints[i].limits[0] for i in sampled])
    hi = np.array([model.joints[i].limits[1] for i in sampled])
    u = _unit_samples(plan, plan.sample_count, len(sampled))
    states = np.tile(np.array([j.home for j in model.joints]), (plan.sample_count, 1))
    states[:, sampled] = lo + u * (hi - lo)
    if plan.deterministic_extremes:
        states = np.vstack([straight_state(model, None), states])
    tool_base, tool = batch_tip_positions(model, states)
    points = tool if plan.include_gripper else tool_base
    reach = np.linalg.norm(points - model.base_pivot.position, axis=1)
    max_reach = float(reach.max())
    if plan.deterministic_extremes and 0.0 < max_reach - float(reach[0]) <= 1e-9:
        # a sampled state can land arithmetic fuzz above the injected analytic
        # extreme (straight-equivalent chains); report the exact value
        max_reach = float(reach[0])
    occupied = np.unique(np.floor(points / plan.voxel_size).astype(np.int64), axis=0)
    report = ReachReport(
        max_reach=max_reach,
        min_reach=float(reach.min()),
        volume_estimate=float(occupied.shape[0]) * plan.voxel_size**3,
        forearm_multiple=max_reach / FOREARM_LENGTH_MM,
        sample_count=points.shape[0],
        voxel_size=plan.voxel_size,
        include_gripper=plan.include_gripper,
    )
    return PointCloud(points=points, reach=reach), report


def compact_envelope(
    model: KinematicModel, compact_state, samples_per_link: int = 10
) -> CompactEnvelope:
    """Bounding box and mount-axis protrusion of the chain at a folded pose."""
    frames = forward_kinematics(model, compact_state)
    pts = [frames[name].position for name in frames]
    order = [j.name for j in model.joints] + ["tool"]
    segments = []
    for a, b in zip(order, order[1:]):
        segments.append((frames[a].position, frames[b].position))
    for start, end in segments:
        for t in np.linspace(0.0, 1.0, max(2, samples_per_link)):
            pts.append(start + t * (end - start))
    cloud = np.array(pts)
    base = model.base_pivot.position
    axis = model.base_pivot.rotation[:, 0]  # mount axis: base +x
    rel = cloud - base
    radial = rel - np.outer(rel @ axis, axis)
    return CompactEnvelope(
        box_min=tuple(float(v) for v in cloud.min(axis=0)),
        box_max=tuple(float(v) for v in cloud.max(axis=0)),
        max_protrusion=float(np.linalg.norm(radial, axis=1).max()),
    )


def export_point_cloud(cloud: PointCloud, fmt: str) -> bytes:
    """Serialize a cloud: csv (x_mm,y_mm,z_mm,reach_mm) or ASCII PLY 1.0."""
    n = cloud.points.shape[0]
    if n == 0:
        raise ValueError("cannot export an empty point cloud")
    if fmt == "csv":
        lines = ["x_mm,y_mm,z_mm,reach_mm"]
        for (x, y, z), r in zip(cloud.points, cloud.reach):
            lines.append(f"{x:.6f},{y:.6f},{z:.6f},{r:.6f}")
        return ("\n".join(lines) + "\n").encode("ascii")
    if fmt == "ply":
        header = [
            "ply",
            "format ascii 1.0",
            f"element vertex {n}",
            "property float x",
            "property float y",
            "property float z",
            "end_header",
        ]
        body = [f"{x:.6f} {y:.6f} {z:.6f}" for x, y, z in cloud.points]
        return ("\n".join(header + body) + "\n").encode("ascii")
    raise ValueError(f"unknown export format {fmt!r}; use 'csv' or 'ply'")


def parse_point_cloud_csv(data: bytes) -> PointCloud:
    """Inverse of the csv export (round-trip checks, downstream tooling)."""
    lines = data.decode("ascii").strip().split("\n")
    if not lines or lines[0] != "x_mm,y_mm,z_mm,reach_mm":
        raise ValueError("not a point-cloud csv (bad header)")
    rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    arr = np.array(rows, dtype=float).reshape(len(rows), 4)
    return PointCloud(points=arr[:, :3], reach=arr[:, 3])
