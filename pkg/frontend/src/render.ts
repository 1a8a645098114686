/**
 * three.js scene: base mount, link cylinders, the scissor pantograph, gripper,
 * live tip marker and a draggable IK target gizmo with orbit camera.
 *
 * World axes follow the service convention (x along the stowed chain, z up);
 * three's y-up camera just orbits the scene as-is. All units stay in mm.
 */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import { TransformControls } from "three/examples/jsm/controls/TransformControls.js";
import { chainFrames, frameByName } from "./arm.js";
import { ModelMessage, StateMessage } from "./protocol.js";
import { pantographSegments, railGap } from "./scissor.js";

const LINK_RADIUS = 9;
const SCISSOR_LINK_RADIUS = 2.5;

export interface SceneCallbacks {
  onGizmoMoved: (position: number[]) => void;
  onGizmoReleased: (position: number[]) => void;
}

export class ArmScene {
  readonly renderer: THREE.WebGLRenderer;
  readonly scene = new THREE.Scene();
  readonly camera: THREE.PerspectiveCamera;
  private controls: OrbitControls;
  private gizmo: TransformControls;
  private gizmoTarget = new THREE.Mesh(
    new THREE.SphereGeometry(12),
    new THREE.MeshStandardMaterial({ color: 0xff9f43, transparent: true, opacity: 0.85 })
  );
  private tipMarker = new THREE.Mesh(
    new THREE.SphereGeometry(7),
    new THREE.MeshStandardMaterial({ color: 0x10ac84 })
  );
  private linkGroup = new THREE.Group();
  private scissorGroup = new THREE.Group();
  private gripperMesh: THREE.Mesh | null = null;
  private model: ModelMessage | null = null;
  private gizmoBusy = false;

  constructor(canvas: HTMLCanvasElement, private callbacks: SceneCallbacks) {
    this.renderer = new THREE.WebGLRenderer({ canvas, antialias: true });
    this.camera = new THREE.PerspectiveCamera(50, 1, 1, 10000);
    this.camera.up.set(0, 0, 1);
    this.camera.position.set(450, -700, 420);
    this.controls = new OrbitControls(this.camera, canvas);
    this.controls.target.set(300, 0, 0);

    this.scene.background = new THREE.Color(0x12141a);
    const hemi = new THREE.HemisphereLight(0xffffff, 0x333344, 1.1);
    const dir = new THREE.DirectionalLight(0xffffff, 1.4);
    dir.position.set(400, -600, 800);
    this.scene.add(hemi, dir);

    const grid = new THREE.GridHelper(1600, 16, 0x2f3542, 0x23262e);
    grid.rotation.x = Math.PI / 2; // grid plane z = 0
    this.scene.add(grid);
    this.scene.add(new THREE.AxesHelper(120));

    this.scene.add(this.linkGroup, this.scissorGroup, this.tipMarker, this.gizmoTarget);

    this.gizmo = new TransformControls(this.camera, canvas);
    this.gizmo.setMode("translate");
    this.gizmo.setSize(0.7);
    this.gizmo.attach(this.gizmoTarget);
    const helper = (this.gizmo as unknown as { getHelper?: () => THREE.Object3D }).getHelper?.();
    this.scene.add(helper ?? (this.gizmo as unknown as THREE.Object3D));
    this.gizmo.addEventListener("dragging-changed", (event: { value?: unknown }) => {
      this.controls.enabled = !event.value;
      if (event.value) {
        this.gizmoBusy = true;
      } else {
        this.gizmoBusy = false;
        this.callbacks.onGizmoReleased(this.gizmoTarget.position.toArray());
      }
    });
    this.gizmo.addEventListener("change", () => {
      if (this.gizmoBusy) {
        this.callbacks.onGizmoMoved(this.gizmoTarget.position.toArray());
      }
    });
  }

  /** Build static link meshes once the model hello arrives. */
  setModel(model: ModelMessage): void {
    this.model = model;
    this.linkGroup.clear();
    // upper-arm mount block at the base pivot
    const mount = new THREE.Mesh(
      new THREE.BoxGeometry(90, 60, 60),
      new THREE.MeshStandardMaterial({ color: 0x57606f })
    );
    mount.position.set(-45, 0, 0);
    mount.name = "mount";
    this.linkGroup.add(mount);
    for (let i = 0; i < model.links.length; i++) {
      const link = model.links[i];
      if (link.length <= 0) continue;
      const mesh = new THREE.Mesh(
        new THREE.CylinderGeometry(LINK_RADIUS, LINK_RADIUS, link.length, 20),
        new THREE.MeshStandardMaterial({ color: 0x8395a7 })
      );
      // cylinder axis y -> local +x, pivot at the segment start
      mesh.geometry.rotateZ(-Math.PI / 2);
      mesh.geometry.translate(link.length / 2, 0, 0);
      mesh.name = `link:${i}`;
      this.linkGroup.add(mesh);
    }
    const jaw = new THREE.Mesh(
      new THREE.BoxGeometry(model.gripperLength, 14, 26),
      new THREE.MeshStandardMaterial({ color: 0xc8d6e5 })
    );
    jaw.geometry.translate(model.gripperLength / 2, 0, 0);
    jaw.name = "gripper";
    this.gripperMesh = jaw;
    this.linkGroup.add(jaw);
  }

  /** Re-pose everything from the latest authoritative state. */
  update(state: StateMessage, gizmoPosition: number[] | null): void {
    if (!this.model) return;
    const frames = chainFrames(this.model, state.joints);
    for (const child of this.linkGroup.children) {
      if (child.name.startsWith("link:")) {
        const i = Number(child.name.slice(5));
        applyFrame(child, frames[i].position, frames[i].rotation);
      }
    }
    if (this.gripperMesh) {
      const gripperFrame = frames[this.model.joints.length - 1];
      applyFrame(this.gripperMesh, gripperFrame.position, gripperFrame.rotation);
    }
    this.updateScissor(frames, state);
    const tool = frameByName(frames, "tool");
    this.tipMarker.position.set(...tool.position);
    if (!this.gizmoBusy) {
      const target = gizmoPosition ?? tool.position;
      this.gizmoTarget.position.set(target[0], target[1], target[2]);
    }
  }

  /** Redraw the pantograph between the extension mount and toolBase. */
  private updateScissor(frames: ReturnType<typeof chainFrames>, state: StateMessage): void {
    if (!this.model) return;
    this.scissorGroup.clear();
    const extIndex = this.model.joints.findIndex((j) => j.kind === "prismatic-scissor");
    if (extIndex < 0) return;
    const extension = state.joints[extIndex];
    const segments = pantographSegments(this.model.scissor, extension);
    const gap = railGap(this.model.scissor, extension);
    const mountFrame = frames[extIndex]; // frame after travel; links start behind it
    const origin = new THREE.Vector3(...mountFrame.position).sub(
      dirVector(mountFrame.rotation, [extension, 0, 0])
    );
    const rot = frameMatrix(mountFrame.rotation);
    const material = new THREE.MeshStandardMaterial({ color: 0xfeca57 });
    const layerOffsets = this.model.scissor.layers === 1 ? [0] : [-10, 10];
    for (const offset of layerOffsets) {
      for (const seg of segments) {
        const a = new THREE.Vector3(seg.from[0], offset, seg.from[1]);
        const b = new THREE.Vector3(seg.to[0], offset, seg.to[1]);
        const mid = a.clone().add(b).multiplyScalar(0.5);
        const len = a.distanceTo(b);
        const bar = new THREE.Mesh(
          new THREE.CylinderGeometry(SCISSOR_LINK_RADIUS, SCISSOR_LINK_RADIUS, len, 8),
          material
        );
        bar.quaternion.setFromUnitVectors(
          new THREE.Vector3(0, 1, 0),
          b.clone().sub(a).normalize()
        );
        bar.position.copy(mid);
        bar.position.applyMatrix4(rot);
        bar.quaternion.premultiply(new THREE.Quaternion().setFromRotationMatrix(rot));
        bar.position.add(origin);
        this.scissorGroup.add(bar);
      }
      // rails along the travel axis
      for (const side of [-gap / 2, gap / 2]) {
        const rail = new THREE.Mesh(
          new THREE.BoxGeometry(extension, 4, 4),
          new THREE.MeshStandardMaterial({ color: 0xff6b6b })
        );
        rail.position.set(extension / 2, offset, side);
        rail.position.applyMatrix4(rot);
        rail.quaternion.premultiply(new THREE.Quaternion().setFromRotationMatrix(rot));
        rail.position.add(origin);
        this.scissorGroup.add(rail);
      }
    }
  }

  resize(width: number, height: number): void {
    this.renderer.setSize(width, height, false);
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
  }

  render(): void {
    this.controls.update();
    this.renderer.render(this.scene, this.camera);
  }

  gizmoWorldPosition(): number[] {
    return this.gizmoTarget.position.toArray();
  }
}

function applyFrame(obj: THREE.Object3D, position: number[] | [number, number, number], rotation: number[]): void {
  obj.position.set(position[0], position[1], position[2]);
  obj.quaternion.setFromRotationMatrix(frameMatrix(rotation));
}

function frameMatrix(rot: number[]): THREE.Matrix4 {
  const m = new THREE.Matrix4();
  m.set(rot[0], rot[1], rot[2], 0, rot[3], rot[4], rot[5], 0, rot[6], rot[7], rot[8], 0, 0, 0, 0, 1);
  return m;
}

function dirVector(rot: number[], v: [number, number, number]): THREE.Vector3 {
  return new THREE.Vector3(
    rot[0] * v[0] + rot[1] * v[1] + rot[2] * v[2],
    rot[3] * v[0] + rot[4] * v[1] + rot[5] * v[2],
    rot[6] * v[0] + rot[7] * v[1] + rot[8] * v[2]
  );
}
