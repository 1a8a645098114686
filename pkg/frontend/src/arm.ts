/**
 * Chain frames for rendering: the same propagation rule the server uses
 * (twist/hinge rotate about the joint axis, the scissor translates along it,
 * links extend along local +x).  Joint values always come from the latest
 * server state message; this code only places meshes, it never predicts.
 */

import { JointKind, ModelMessage } from "./protocol.js";

export type Mat3 = number[]; // row-major, 9 entries
export type Vec3 = [number, number, number];

export interface Frame {
  name: string;
  kind: JointKind | "toolBase" | "tool";
  position: Vec3;
  rotation: Mat3;
  linkLength: number; // segment drawn from this frame along local +x
}

export const IDENTITY: Mat3 = [1, 0, 0, 0, 1, 0, 0, 0, 1];

export function matMul(a: Mat3, b: Mat3): Mat3 {
  const out = new Array<number>(9);
  for (let r = 0; r < 3; r++) {
    for (let c = 0; c < 3; c++) {
      out[3 * r + c] =
        a[3 * r] * b[c] + a[3 * r + 1] * b[3 + c] + a[3 * r + 2] * b[6 + c];
    }
  }
  return out;
}

export function matVec(m: Mat3, v: Vec3): Vec3 {
  return [
    m[0] * v[0] + m[1] * v[1] + m[2] * v[2],
    m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
    m[6] * v[0] + m[7] * v[1] + m[8] * v[2],
  ];
}

export function rodrigues(axis: number[], angle: number): Mat3 {
  const [x, y, z] = axis;
  const c = Math.cos(angle);
  const s = Math.sin(angle);
  const t = 1 - c;
  return [
    t * x * x + c, t * x * y - s * z, t * x * z + s * y,
    t * x * y + s * z, t * y * y + c, t * y * z - s * x,
    t * x * z - s * y, t * y * z + s * x, t * z * z + c,
  ];
}

/**
 * Propagate the chain; returns one frame per joint (joint motion applied,
 * link not yet traversed) plus toolBase and tool.
 */
export function chainFrames(model: ModelMessage, joints: number[]): Frame[] {
  let p: Vec3 = [0, 0, 0];
  let rot: Mat3 = IDENTITY;
  const frames: Frame[] = [];
  let toolBase: Frame | null = null;
  for (let i = 0; i < model.joints.length; i++) {
    const spec = model.joints[i];
    const link = model.links[i];
    const q = joints[i] ?? spec.home;
    if (spec.kind === "revolute-twist" || spec.kind === "revolute-hinge") {
      rot = matMul(rot, rodrigues(spec.axis, q));
    } else if (spec.kind === "prismatic-scissor") {
      const dir = matVec(rot, spec.axis as Vec3);
      p = [p[0] + dir[0] * q, p[1] + dir[1] * q, p[2] + dir[2] * q];
    }
    frames.push({
      name: spec.name,
      kind: spec.kind,
      position: [...p] as Vec3,
      rotation: [...rot],
      linkLength: link ? link.length : 0,
    });
    if (spec.kind === "prismatic-scissor") {
      toolBase = {
        name: "toolBase",
        kind: "toolBase",
        position: [...p] as Vec3,
        rotation: [...rot],
        linkLength: 0,
      };
    }
    const step = matVec(rot, [link ? link.length : 0, 0, 0]);
    p = [p[0] + step[0], p[1] + step[1], p[2] + step[2]];
  }
  if (toolBase) frames.push(toolBase);
  const tipDir = matVec(rot, [model.gripperLength, 0, 0]);
  frames.push({
    name: "tool",
    kind: "tool",
    position: [p[0] + tipDir[0], p[1] + tipDir[1], p[2] + tipDir[2]],
    rotation: [...rot],
    linkLength: 0,
  });
  return frames;
}

export function frameByName(frames: Frame[], name: string): Frame {
  const f = frames.find((fr) => fr.name === name);
  if (!f) throw new Error(`no frame ${name}`);
  return f;
}

export function distance(a: Vec3, b: Vec3): number {
  return Math.hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}
