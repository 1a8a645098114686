/**
 * DOM panel: connection/stale badges, per-joint sliders with live readouts,
 * extension slider, macro buttons, toast area.  Readouts render the latest
 * server state verbatim.
 */

import { JointInfo, ModelMessage, StateMessage } from "./protocol.js";
import { UiState, controllableJoints, isStale } from "./state.js";

export interface PanelCallbacks {
  onJog: (joint: string, target: number) => void;
  onMacro: (name: "expand" | "collapse") => void;
  onStop: () => void;
}

const SLIDER_STEPS = 400;

export class Panel {
  private sliders = new Map<string, HTMLInputElement>();
  private readouts = new Map<string, HTMLElement>();
  private joints: JointInfo[] = [];

  constructor(private root: HTMLElement, private callbacks: PanelCallbacks) {}

  buildControls(model: ModelMessage): void {
    const host = this.root.querySelector("#joints") as HTMLElement;
    host.textContent = "";
    this.sliders.clear();
    this.readouts.clear();
    // gripper-r ships unimplemented; it gets no control at all
    this.joints = controllableJoints(model);
    for (const joint of this.joints) {
      const row = document.createElement("div");
      row.className = "joint-row";
      const label = document.createElement("label");
      label.textContent = joint.name;
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = "0";
      slider.max = String(SLIDER_STEPS);
      slider.step = "1";
      slider.value = String(toSlider(joint, joint.home));
      slider.addEventListener("input", () => {
        this.callbacks.onJog(joint.name, fromSlider(joint, Number(slider.value)));
      });
      const readout = document.createElement("span");
      readout.className = "readout";
      row.append(label, slider, readout);
      host.append(row);
      this.sliders.set(joint.name, slider);
      this.readouts.set(joint.name, readout);
    }
    (this.root.querySelector("#expand") as HTMLButtonElement).onclick = () =>
      this.callbacks.onMacro("expand");
    (this.root.querySelector("#collapse") as HTMLButtonElement).onclick = () =>
      this.callbacks.onMacro("collapse");
    (this.root.querySelector("#stop") as HTMLButtonElement).onclick = () =>
      this.callbacks.onStop();
  }

  /** Refresh badges, readouts and toasts from the reduced state. */
  update(ui: UiState, now: number, model: ModelMessage | null): void {
    const badge = this.root.querySelector("#connection") as HTMLElement;
    badge.textContent = ui.connection;
    badge.dataset.state = ui.connection;
    const stale = this.root.querySelector("#stale") as HTMLElement;
    stale.hidden = !isStale(ui, now);
    const banner = this.root.querySelector("#reconnect") as HTMLElement;
    banner.hidden = ui.connection === "connected";

    if (model && ui.lastState) {
      this.showState(model, ui.lastState);
    }

    const toasts = this.root.querySelector("#toasts") as HTMLElement;
    toasts.textContent = "";
    for (const toast of ui.toasts) {
      const el = document.createElement("div");
      el.className = "toast";
      el.textContent = toast.text;
      toasts.append(el);
    }
  }

  private showState(model: ModelMessage, state: StateMessage): void {
    const indexOf = new Map(model.joints.map((j, i) => [j.name, i]));
    for (const joint of this.joints) {
      const value = state.joints[indexOf.get(joint.name)!];
      const readout = this.readouts.get(joint.name);
      if (readout) {
        readout.textContent =
          joint.kind === "prismatic-scissor"
            ? `${value.toFixed(1)} mm`
            : `${((value * 180) / Math.PI).toFixed(1)} deg`;
      }
      const slider = this.sliders.get(joint.name);
      // follow the arm unless the operator is holding this slider
      if (slider && document.activeElement !== slider) {
        slider.value = String(toSlider(joint, value));
      }
    }
    const status = this.root.querySelector("#status") as HTMLElement;
    status.textContent =
      `mode ${state.mode}  reach ${state.reach.toFixed(1)} mm` +
      (state.mode === "macro-running"
        ? `  macro ${(state.macroProgress * 100).toFixed(0)}%`
        : "");
  }
}

function toSlider(joint: JointInfo, value: number): number {
  const [lo, hi] = joint.limits;
  return Math.round(((value - lo) / (hi - lo)) * SLIDER_STEPS);
}

function fromSlider(joint: JointInfo, step: number): number {
  const [lo, hi] = joint.limits;
  return lo + (step / SLIDER_STEPS) * (hi - lo);
}
