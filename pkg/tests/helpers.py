"""Shared test oracles: random in-limit states and the finite-difference Jacobian."""

import numpy as np

from auglimb.geometry import axis_angle_from_matrix
from auglimb.kinematics import forward_kinematics
from auglimb.model import home_state


def random_state(model, rng):
    q = home_state(model)
    for i in model.pose_joint_indices():
        lo, hi = model.joints[i].limits
        q[i] = rng.uniform(lo, hi)
    return q


def fd_jacobian(model, q, frame, h_scale=1e-6):
    """Central-difference oracle, step h_scale of each joint's range."""
    cols = model.pose_joint_indices()
    jac = np.zeros((6, len(cols)))
    for c, i in enumerate(cols):
        lo, hi = model.joints[i].limits
        h = (hi - lo) * h_scale
        qp, qm = q.copy(), q.copy()
        qp[i] += h
        qm[i] -= h
        fp = forward_kinematics(model, qp)[frame]
        fm = forward_kinematics(model, qm)[frame]
        jac[:3, c] = (fp.position - fm.position) / (2 * h)
        jac[3:, c] = axis_angle_from_matrix(fp.rotation @ fm.rotation.T) / (2 * h)
    return jac
