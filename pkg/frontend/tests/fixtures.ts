/** Model hello matching the built-in device (what the service sends on connect). */

import { ModelMessage } from "../src/protocol.js";

const TWIST = (150 * Math.PI) / 180;
const HINGE = (105 * Math.PI) / 180;
const X = [1, 0, 0];
const Y = [0, 1, 0];

export function defaultModelMessage(): ModelMessage {
  return {
    type: "model",
    joints: [
      { name: "shoulder-r", kind: "revolute-twist", axis: X, limits: [-TWIST, TWIST], home: 0, implemented: true },
      { name: "shoulder-t", kind: "revolute-hinge", axis: Y, limits: [-HINGE, HINGE], home: 0, implemented: true },
      { name: "elbow", kind: "revolute-hinge", axis: Y, limits: [-HINGE, HINGE], home: 0, implemented: true },
      { name: "wrist-r", kind: "revolute-twist", axis: X, limits: [-TWIST, TWIST], home: 0, implemented: true },
      { name: "wrist-t", kind: "revolute-hinge", axis: Y, limits: [-HINGE, HINGE], home: 0, implemented: true },
      { name: "extension", kind: "prismatic-scissor", axis: X, limits: [70, 250], home: 70, implemented: true },
      { name: "gripper-r", kind: "revolute-twist", axis: X, limits: [-TWIST, TWIST], home: 0, implemented: false },
      { name: "gripper", kind: "gripper-aperture", axis: Y, limits: [0, (60 * Math.PI) / 180], home: 0, implemented: true },
    ],
    links: [
      { name: "shoulder-mount", length: 0 },
      { name: "upper-segment", length: 160 },
      { name: "forearm-segment", length: 140 },
      { name: "wrist-housing", length: 0 },
      { name: "extension-mount", length: 80 },
      { name: "scissor-carriage", length: 0 },
      { name: "gripper-hub", length: 0 },
      { name: "gripper-jaw", length: 0 },
    ],
    scissor: {
      stages: 2,
      halfLink: 60,
      hingeOffset: 30,
      layers: 2,
      thetaRange: [Math.asin(1 / 6), Math.asin(11 / 12)],
    },
    gripperLength: 80,
    tickRate: 50,
  };
}

export function straightJoints(extension: number): number[] {
  return [0, 0, 0, 0, 0, extension, 0, 0];
}
