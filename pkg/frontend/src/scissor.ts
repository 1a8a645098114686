/**
 * Pantograph layout of the scissor extension unit, in the unit's own plane.
 *
 * The unit runs along local +x from 0 to the current extension e.  Half the
 * hinge stack-up sits at each end; between them `stages` crossings of
 * 2*halfLink-long links at cross angle theta, each spanning 2*halfLink*sin(theta)
 * along x and 2*halfLink*cos(theta) across (the rail gap).  The same layout is
 * drawn once per layer, offset out of plane.
 */

import { ScissorInfo } from "./protocol.js";

export interface ScissorSegment {
  from: [number, number]; // (x, y) in the scissor plane, mm
  to: [number, number];
}

export function thetaOfExtension(s: ScissorInfo, extension: number): number {
  const arg = (extension - s.hingeOffset) / (2 * s.stages * s.halfLink);
  const theta = Math.asin(Math.min(1, Math.max(-1, arg)));
  return Math.min(s.thetaRange[1], Math.max(s.thetaRange[0], theta));
}

export function extensionOfTheta(s: ScissorInfo, theta: number): number {
  return s.hingeOffset + 2 * s.stages * s.halfLink * Math.sin(theta);
}

/** Crossing-link segments for one layer at the given extension. */
export function pantographSegments(s: ScissorInfo, extension: number): ScissorSegment[] {
  const theta = thetaOfExtension(s, extension);
  const span = 2 * s.halfLink * Math.sin(theta); // one crossing along x
  const gap = 2 * s.halfLink * Math.cos(theta); // rail separation
  const segments: ScissorSegment[] = [];
  let x = s.hingeOffset / 2;
  for (let k = 0; k < s.stages; k++) {
    segments.push({ from: [x, -gap / 2], to: [x + span, gap / 2] });
    segments.push({ from: [x, gap / 2], to: [x + span, -gap / 2] });
    x += span;
  }
  return segments;
}

/** Total drawn length along x including the end stack-ups. */
export function drawnExtension(s: ScissorInfo, extension: number): number {
  const segments = pantographSegments(s, extension);
  let maxX = 0;
  for (const seg of segments) {
    maxX = Math.max(maxX, seg.from[0], seg.to[0]);
  }
  return maxX + s.hingeOffset / 2;
}

/** Rail gap at the given extension (how "open" the unit is drawn). */
export function railGap(s: ScissorInfo, extension: number): number {
  return 2 * s.halfLink * Math.cos(thetaOfExtension(s, extension));
}
