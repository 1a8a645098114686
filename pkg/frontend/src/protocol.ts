/**
 * Wire protocol types, mirrored from the server's teleop schema
 * (src/auglimb/protocol/teleop.schema.json). JSON text frames over a
 * websocket; millimeters and radians throughout.
 */

export type JointKind =
  | "revolute-twist"
  | "revolute-hinge"
  | "prismatic-scissor"
  | "gripper-aperture";

// --- client -> server ---

export interface JogMessage {
  type: "jog";
  joint: string;
  target: number;
}

export interface PoseTargetMessage {
  type: "poseTarget";
  position: number[]; // [x, y, z] mm
  rotation: number[]; // row-major 3x3
}

export interface MacroMessage {
  type: "macro";
  name: "expand" | "collapse";
}

export interface StopMessage {
  type: "stop";
}

export type ClientMessage = JogMessage | PoseTargetMessage | MacroMessage | StopMessage;

// --- server -> client ---

export interface JointInfo {
  name: string;
  kind: JointKind;
  axis: number[];
  limits: [number, number];
  home: number;
  implemented: boolean;
}

export interface LinkInfo {
  name: string;
  length: number;
}

export interface ScissorInfo {
  stages: number;
  halfLink: number;
  hingeOffset: number;
  layers: number;
  thetaRange: [number, number];
}

export interface ModelMessage {
  type: "model";
  joints: JointInfo[];
  links: LinkInfo[];
  scissor: ScissorInfo;
  gripperLength: number;
  tickRate: number;
}

export type SessionMode = "idle" | "jogging" | "ik-tracking" | "macro-running";

export interface StateMessage {
  type: "state";
  t: number;
  joints: number[];
  tipPose: { position: number[]; rotation: number[] };
  reach: number;
  mode: SessionMode;
  macroProgress: number;
}

export interface ErrorMessage {
  type: "error";
  code: string;
  detail?: string;
}

export interface IkFailedMessage {
  type: "ikFailed";
  posResidual: number;
  rotResidual: number;
}

export type ServerMessage = ModelMessage | StateMessage | ErrorMessage | IkFailedMessage;

// --- builders (everything the console ever emits goes through these) ---

export function buildJog(joint: string, target: number): JogMessage {
  return { type: "jog", joint, target };
}

export function buildPoseTarget(position: number[], rotation: number[]): PoseTargetMessage {
  if (position.length !== 3 || rotation.length !== 9) {
    throw new Error("poseTarget needs position[3] and rotation[9]");
  }
  return { type: "poseTarget", position: [...position], rotation: [...rotation] };
}

export function buildMacro(name: "expand" | "collapse"): MacroMessage {
  return { type: "macro", name };
}

export function buildStop(): StopMessage {
  return { type: "stop" };
}

export function parseServerMessage(text: string): ServerMessage | null {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch {
    return null;
  }
  if (typeof parsed !== "object" || parsed === null) return null;
  const type = (parsed as { type?: unknown }).type;
  if (type === "model" || type === "state" || type === "error" || type === "ikFailed") {
    return parsed as ServerMessage;
  }
  return null;
}
