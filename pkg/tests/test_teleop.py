import math

import numpy as np
import pytest

from auglimb.model import COMPACT_POSE, default_model, home_state
from auglimb.teleop import (
    MODE_IDLE,
    MODE_IK_TRACKING,
    MODE_JOGGING,
    MODE_MACRO,
    Session,
    command,
    make_session,
    model_message,
    state_message,
    tick,
)


@pytest.fixture
def model():
    return default_model()


@pytest.fixture
def session(model):
    return make_session(model)


def run_macro(session, name, max_ticks=20000):
    reply = command(session, {"type": "macro", "name": name})
    assert reply is None
    for _ in range(max_ticks):
        update = tick(session)
        if update["mode"] == MODE_IDLE:
            return update
    raise AssertionError(f"macro {name} did not finish in {max_ticks} ticks")


def test_session_starts_compact_idle(session):
    assert session.mode == MODE_IDLE
    np.testing.assert_array_equal(session.current, np.array(COMPACT_POSE))


def test_fixed_point_when_target_is_current(session):
    before = session.current.copy()
    update = tick(session)
    np.testing.assert_array_equal(session.current, before)
    assert update["mode"] == MODE_IDLE


def test_rate_arithmetic_exact(model):
    # 10 deg away at 50 deg/s and 50 Hz moves exactly 1 deg this tick
    rates = np.full(model.n_joints, math.radians(50.0))
    rates[model.extension_index()] = 40.0
    session = make_session(model, start_state=home_state(model), tick_rate=50.0, rate_limits=rates)
    command(session, {"type": "jog", "joint": "elbow", "target": math.radians(10.0)})
    tick(session)
    i = model.joint_index("elbow")
    assert session.current[i] == pytest.approx(math.radians(1.0), abs=1e-15)


def test_convergence_exact_no_overshoot(model):
    rng = np.random.default_rng(3)
    session = make_session(model)
    for trial in range(20):
        targets = {}
        for i in model.pose_joint_indices():
            lo, hi = model.joints[i].limits
            targets[model.joints[i].name] = rng.uniform(lo, hi)
        for name, value in targets.items():
            assert command(session, {"type": "jog", "joint": name, "target": value}) is None
        prev_gap = None
        for _ in range(1000):
            tick(session)
            gap = np.abs(session.targets - session.current)
            if prev_gap is not None:
                assert np.all(gap <= prev_gap + 1e-12)  # monotone, no oscillation
            prev_gap = gap
            if session.mode == MODE_IDLE:
                break
        np.testing.assert_array_equal(session.current, session.targets)
        assert session.mode == MODE_IDLE


def test_rate_limit_and_clamp_invariants(model):
    rng = np.random.default_rng(5)
    session = make_session(model)
    step = session.rate_limits / session.tick_rate
    lo = np.array([j.limits[0] for j in model.joints])
    hi = np.array([j.limits[1] for j in model.joints])
    for k in range(2000):
        if k % 97 == 0:
            i = int(rng.integers(0, model.n_joints))
            command(
                session,
                {
                    "type": "jog",
                    "joint": model.joints[i].name,
                    "target": float(rng.uniform(lo[i] - 1.0, hi[i] + 1.0)),
                },
            )
        before = session.current.copy()
        update = tick(session)
        delta = np.abs(session.current - before)
        assert np.all(delta <= step + 1e-9)
        assert np.all(session.current >= lo) and np.all(session.current <= hi)
        joints = np.array(update["joints"])
        assert np.all(joints >= lo) and np.all(joints <= hi)


def test_jog_clamps_to_limits(session, model):
    command(session, {"type": "jog", "joint": "extension", "target": 300.0})
    assert session.targets[model.extension_index()] == 250.0
    assert session.mode == MODE_JOGGING


def test_jog_unknown_joint(session):
    reply = command(session, {"type": "jog", "joint": "tail", "target": 1.0})
    assert reply["type"] == "error" and reply["code"] == "unknownJoint"


def test_gripper_r_never_moves(session, model):
    i = model.joint_index("gripper-r")
    command(session, {"type": "jog", "joint": "gripper-r", "target": 0.9})
    for _ in range(50):
        tick(session)
        assert session.current[i] == 0.0
    run_macro(session, "expand")
    assert session.current[i] == 0.0


def test_expand_reaches_710(session, model):
    update = run_macro(session, "expand")
    assert update["reach"] == pytest.approx(710.0, abs=1e-9)
    assert update["macroProgress"] == 1.0


def test_expand_then_collapse_returns_exact_compact(session):
    start = session.current.copy()
    run_macro(session, "expand")
    run_macro(session, "collapse")
    np.testing.assert_array_equal(session.current, start)


def test_macro_while_running_is_busy(session):
    assert command(session, {"type": "macro", "name": "expand"}) is None
    tick(session)
    reply = command(session, {"type": "macro", "name": "collapse"})
    assert reply["type"] == "error" and reply["code"] == "busy"


def test_macro_unknown_name(session):
    reply = command(session, {"type": "macro", "name": "wave"})
    assert reply["type"] == "error" and reply["code"] == "badMessage"


def test_stop_freezes_targets(session, model):
    command(session, {"type": "jog", "joint": "elbow", "target": 1.0})
    for _ in range(5):
        tick(session)
    moving = session.current.copy()
    assert command(session, {"type": "stop"}) is None
    assert session.mode == MODE_IDLE
    np.testing.assert_array_equal(session.targets, moving)
    tick(session)
    np.testing.assert_array_equal(session.current, moving)


def test_pose_target_converged_tracks(session, model):
    from auglimb.kinematics import forward_kinematics

    q = home_state(model)
    q[model.joint_index("elbow")] = 0.4
    tip = forward_kinematics(model, q)["tool"]
    reply = command(
        session,
        {
            "type": "poseTarget",
            "position": [float(v) for v in tip.position],
            "rotation": [float(v) for v in tip.rotation.reshape(9)],
        },
    )
    assert reply is None
    assert session.mode == MODE_IK_TRACKING
    for _ in range(5000):
        update = tick(session)
        if update["mode"] == MODE_IDLE:
            break
    np.testing.assert_allclose(update["tipPose"]["position"], tip.position, atol=1e-2)


def test_pose_target_unreachable_ik_failed(session):
    before = session.targets.copy()
    reply = command(
        session,
        {
            "type": "poseTarget",
            "position": [800.0, 0.0, 0.0],
            "rotation": [1.0, 0, 0, 0, 1.0, 0, 0, 0, 1.0],
        },
    )
    assert reply["type"] == "ikFailed"
    assert reply["posResidual"] > 0
    np.testing.assert_array_equal(session.targets, before)


def test_malformed_commands(session):
    assert command(session, "stop")["code"] == "badMessage"
    assert command(session, {"kind": "stop"})["code"] == "badMessage"
    assert command(session, {"type": "warp"})["code"] == "badMessage"
    assert command(session, {"type": "jog", "joint": "elbow"})["code"] == "badMessage"
    assert (
        command(session, {"type": "poseTarget", "position": [0, 0]})["code"]
        == "badMessage"
    )


def test_state_message_fields(session, model):
    update = tick(session)
    assert update["type"] == "state"
    assert update["t"] == pytest.approx(1.0 / session.tick_rate)
    assert len(update["joints"]) == model.n_joints
    assert len(update["tipPose"]["rotation"]) == 9
    assert update["reach"] > 0
    hello = model_message(session)
    assert hello["type"] == "model"
    assert hello["scissor"]["stages"] == model.scissor.stages
    assert hello["gripperLength"] == model.gripper_length


def test_session_requires_positive_rates(model):
    with pytest.raises(ValueError):
        make_session(model, tick_rate=0.0)
    with pytest.raises(ValueError):
        make_session(model, rate_limits=np.zeros(model.n_joints))
