"""Digital model of the AugLimb wearable robotic limb.

Kinematics of the 7-DOF chain plus double-layer scissor extension unit,
reachable-workspace sampling, gravity/payload statics, and a Wizard-of-Oz
teleoperation service with a browser console.
"""

from .geometry import Pose
from .kinematics import (
    IkNumericalError,
    IkRequest,
    IkResult,
    batch_tip_positions,
    forward_kinematics,
    geometric_jacobian,
    reach,
    solve_ik,
)
from .model import (
    JointKind,
    JointSpec,
    Keyframe,
    KinematicModel,
    LinkSpec,
    ModelError,
    clamp_state,
    default_model,
    home_state,
    load_model,
    serialize_model,
    straight_state,
    validate_model,
)
from .scissor import (
    ScissorParams,
    ScissorState,
    actuator_to_theta,
    actuator_travel_max,
    d_extension_d_actuator,
    extension_of_theta,
    extension_range,
    extension_ratio,
    theta_of_extension,
)
from .statics import GRAVITY_DEFAULT, JointLoadRow, StaticsReport, gravity_torques, max_payload
from .teleop import Session, TransformMacro, command, make_session, tick
from .workspace import (
    CompactEnvelope,
    PointCloud,
    ReachReport,
    SamplingPlan,
    compact_envelope,
    export_point_cloud,
    sample_workspace,
)

__version__ = "0.1.0"
