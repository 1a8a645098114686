"""Scripted-client integration tests for the websocket teleop service."""

import json
from pathlib import Path

import jsonschema
import pytest
from fastapi.testclient import TestClient

from auglimb.model import default_model
from auglimb.server import create_app
from auglimb.teleop import default_rate_limits, make_session

SCHEMA = json.loads(
    (Path(__file__).parent.parent / "src/auglimb/protocol/teleop.schema.json").read_text()
)


def server_validator():
    return jsonschema.Draft7Validator(
        {"$ref": "#/$defs/serverMessage", "$defs": SCHEMA["$defs"]}
    )


@pytest.fixture
def client():
    model = default_model()
    # 20x joint speeds so wire-level motion tests finish quickly
    session = make_session(
        model, tick_rate=200.0, rate_limits=default_rate_limits(model) * 20.0
    )
    app = create_app(session)
    with TestClient(app) as c:
        yield c


def recv_until(ws, msg_type, limit=400):
    """Read frames (validating each) until one of the wanted type arrives."""
    validator = server_validator()
    for _ in range(limit):
        msg = ws.receive_json()
        validator.validate(msg)
        if msg["type"] == msg_type:
            return msg
    raise AssertionError(f"no {msg_type!r} message within {limit} frames")


def recv_state(ws, predicate, limit=2000):
    for _ in range(limit):
        msg = ws.receive_json()
        if msg["type"] == "state" and predicate(msg):
            return msg
    raise AssertionError("state predicate never satisfied")


def test_hello_then_states(client):
    with client.websocket_connect("/ws") as ws:
        hello = ws.receive_json()
        server_validator().validate(hello)
        assert hello["type"] == "model"
        assert [j["name"] for j in hello["joints"]][:2] == ["shoulder-r", "shoulder-t"]
        state = recv_until(ws, "state")
        assert state["mode"] in ("idle", "jogging", "ik-tracking", "macro-running")


def test_stop_echoes_idle_state(client):
    with client.websocket_connect("/ws") as ws:
        recv_until(ws, "model")
        ws.send_text(json.dumps({"type": "stop"}))
        state = recv_state(ws, lambda m: m["mode"] == "idle")
        assert state["macroProgress"] == 0.0


def test_malformed_frame_keeps_connection(client):
    with client.websocket_connect("/ws") as ws:
        recv_until(ws, "model")
        ws.send_text("{not json")
        err = recv_until(ws, "error")
        assert err["code"] == "badMessage"
        # connection still works
        ws.send_text(json.dumps({"type": "stop"}))
        recv_state(ws, lambda m: m["mode"] == "idle")


def test_jog_clamped_to_extension_limit(client):
    with client.websocket_connect("/ws") as ws:
        recv_until(ws, "model")
        ws.send_text(json.dumps({"type": "jog", "joint": "extension", "target": 300.0}))
        state = recv_state(ws, lambda m: m["joints"][5] == 250.0)
        assert state["joints"][5] == 250.0


def test_two_clients_last_writer_wins_per_joint(client):
    with client.websocket_connect("/ws") as a, client.websocket_connect("/ws") as b:
        recv_until(a, "model")
        recv_until(b, "model")
        a.send_text(json.dumps({"type": "jog", "joint": "extension", "target": 120.0}))
        b.send_text(json.dumps({"type": "jog", "joint": "shoulder-r", "target": 0.3}))
        # both targets are active: each client sees both joints arrive
        state = recv_state(
            a,
            lambda m: abs(m["joints"][5] - 120.0) < 1e-9
            and abs(m["joints"][0] - 0.3) < 1e-9,
        )
        assert state is not None


def test_unreachable_pose_target_yields_ik_failed(client):
    with client.websocket_connect("/ws") as ws:
        recv_until(ws, "model")
        ws.send_text(
            json.dumps(
                {
                    "type": "poseTarget",
                    "position": [800.0, 0.0, 0.0],
                    "rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1],
                }
            )
        )
        reply = recv_until(ws, "ikFailed")
        assert reply["posResidual"] > 0


def test_macro_over_wire(client):
    with client.websocket_connect("/ws") as ws:
        recv_until(ws, "model")
        ws.send_text(json.dumps({"type": "macro", "name": "expand"}))
        state = recv_state(
            ws, lambda m: m["macroProgress"] == 1.0 and m["mode"] == "idle", limit=20000
        )
        assert state["reach"] == pytest.approx(710.0, abs=1e-6)


def test_session_survives_disconnect(client):
    with client.websocket_connect("/ws") as ws:
        recv_until(ws, "model")
        ws.send_text(json.dumps({"type": "jog", "joint": "elbow", "target": 0.0}))
        recv_until(ws, "state")
    # reconnect: same session, service still ticking
    with client.websocket_connect("/ws") as ws:
        hello = ws.receive_json()
        assert hello["type"] == "model"
        recv_until(ws, "state")


def test_client_fixture_messages_validate():
    # the documented client vocabulary conforms to the shared schema
    validator = jsonschema.Draft7Validator(
        {"$ref": "#/$defs/clientMessage", "$defs": SCHEMA["$defs"]}
    )
    fixtures = [
        {"type": "jog", "joint": "extension", "target": 250.0},
        {
            "type": "poseTarget",
            "position": [400.0, 0.0, 100.0],
            "rotation": [1, 0, 0, 0, 1, 0, 0, 0, 1],
        },
        {"type": "macro", "name": "expand"},
        {"type": "macro", "name": "collapse"},
        {"type": "stop"},
    ]
    for msg in fixtures:
        validator.validate(msg)
    with pytest.raises(jsonschema.ValidationError):
        validator.validate({"type": "jog", "joint": "elbow"})
