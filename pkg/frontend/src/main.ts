/** Entry point: socket -> reducer -> scene + panel; controls -> protocol. */

import { buildJog, buildMacro, buildPoseTarget, buildStop } from "./protocol.js";
import { ArmScene } from "./render.js";
import { TeleopSocket, defaultServiceUrl } from "./socket.js";
import { UiEvent, initialUiState, reduce } from "./state.js";
import { Panel } from "./ui.js";

let ui = initialUiState();

function dispatch(event: UiEvent): void {
  ui = reduce(ui, event);
}

const canvas = document.querySelector("#scene") as HTMLCanvasElement;
const scene = new ArmScene(canvas, {
  onGizmoMoved: (position) => dispatch({ kind: "gizmoMoved", position }),
  onGizmoReleased: (position) => {
    // orientation rides along: reuse the live tip rotation as the target
    const rotation = ui.lastState?.tipPose.rotation ?? [1, 0, 0, 0, 1, 0, 0, 0, 1];
    socket.send(buildPoseTarget(position, rotation));
  },
});

const panel = new Panel(document.body, {
  onJog: (joint, target) => socket.send(buildJog(joint, target)),
  onMacro: (name) => socket.send(buildMacro(name)),
  onStop: () => socket.send(buildStop()),
});

const socket = new TeleopSocket({
  url: defaultServiceUrl(window.location),
  onStateChange: (state) => dispatch({ kind: "connection", state }),
  onMessage: (msg) => {
    dispatch({ kind: "server", msg, now: performance.now() });
    if (msg.type === "model") {
      scene.setModel(msg);
      panel.buildControls(msg);
    }
  },
});
socket.connect();

function frame(): void {
  dispatch({ kind: "pruneToasts", now: performance.now() });
  if (ui.lastState) {
    scene.update(ui.lastState, ui.gizmoPosition);
  }
  panel.update(ui, performance.now(), ui.model);
  scene.render();
  requestAnimationFrame(frame);
}

function fitCanvas(): void {
  const rect = canvas.parentElement!.getBoundingClientRect();
  scene.resize(rect.width, rect.height);
}

window.addEventListener("resize", fitCanvas);
fitCanvas();
requestAnimationFrame(frame);
