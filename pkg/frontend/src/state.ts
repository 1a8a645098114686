/**
 * Console state and its reducer.
 *
 * The server is authoritative: joint readouts and the rendered pose always
 * come from the latest state message, never from local integration. The
 * reducer is pure so every transition is unit-testable without a DOM.
 */

import { IkFailedMessage, ModelMessage, ServerMessage, StateMessage } from "./protocol.js";
import { ConnectionState } from "./socket.js";

export interface Toast {
  text: string;
  at: number; // ms timestamp
}

export interface UiState {
  connection: ConnectionState;
  model: ModelMessage | null;
  lastState: StateMessage | null;
  lastStateAt: number; // ms timestamp of the newest state message
  selectedJoint: string | null;
  /** world position of the drag gizmo; null = ride along with the tip */
  gizmoPosition: number[] | null;
  toasts: Toast[];
}

export type UiEvent =
  | { kind: "connection"; state: ConnectionState }
  | { kind: "server"; msg: ServerMessage; now: number }
  | { kind: "selectJoint"; joint: string | null }
  | { kind: "gizmoMoved"; position: number[] }
  | { kind: "pruneToasts"; now: number };

export const TOAST_LIFETIME_MS = 4000;
export const STALE_AFTER_MS = 500;

export function initialUiState(): UiState {
  return {
    connection: "disconnected",
    model: null,
    lastState: null,
    lastStateAt: 0,
    selectedJoint: null,
    gizmoPosition: null,
    toasts: [],
  };
}

export function reduce(state: UiState, event: UiEvent): UiState {
  switch (event.kind) {
    case "connection":
      return { ...state, connection: event.state };
    case "selectJoint":
      return { ...state, selectedJoint: event.joint };
    case "gizmoMoved":
      return { ...state, gizmoPosition: [...event.position] };
    case "pruneToasts":
      return {
        ...state,
        toasts: state.toasts.filter((t) => event.now - t.at < TOAST_LIFETIME_MS),
      };
    case "server":
      return applyServer(state, event.msg, event.now);
  }
}

function applyServer(state: UiState, msg: ServerMessage, now: number): UiState {
  switch (msg.type) {
    case "model":
      return { ...state, model: msg };
    case "state":
      // wholesale replacement: no blending with stale or predicted values
      return { ...state, lastState: msg, lastStateAt: now };
    case "ikFailed":
      return {
        ...state,
        // snap the gizmo back onto the live tip
        gizmoPosition: null,
        toasts: [...state.toasts, { text: ikFailedText(msg), at: now }],
      };
    case "error":
      return {
        ...state,
        toasts: [
          ...state.toasts,
          { text: msg.detail ? `${msg.code}: ${msg.detail}` : msg.code, at: now },
        ],
      };
  }
}

function ikFailedText(msg: IkFailedMessage): string {
  return `target unreachable (off by ${msg.posResidual.toFixed(1)} mm)`;
}

export function isStale(state: UiState, now: number): boolean {
  return state.lastState !== null && now - state.lastStateAt > STALE_AFTER_MS;
}

/** Joints the operator can drive: implemented, in model order. */
export function controllableJoints(model: ModelMessage) {
  return model.joints.filter((j) => j.implemented);
}
