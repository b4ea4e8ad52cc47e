// Scene management for the 3D view: component meshes placed at their
// annotated coordinates, orbit/zoom/pan camera, selection info, and three
// axis-aligned cut planes driven by sliders. Cuts only touch material
// clipping state, never scene geometry, so resetting the sliders restores
// the initial view exactly. Rendering (WebGL, event wiring, glTF fetching)
// lives in the browser entry; everything here runs headless.

import * as THREE from "three";

import type { ComponentView, ExtruderView } from "./types.js";

export type Axis = "x" | "y" | "z";

export interface SelectionInfo {
  componentId: string;
  type: string;
  model: string;
  brand: string;
}

const AXES: Record<Axis, THREE.Vector3> = {
  x: new THREE.Vector3(-1, 0, 0),
  y: new THREE.Vector3(0, -1, 0),
  z: new THREE.Vector3(0, 0, -1),
};

export class ExtruderScene {
  readonly scene = new THREE.Scene();
  readonly cutPlanes: Record<Axis, THREE.Plane>;
  private meshes = new Map<string, THREE.Object3D>();
  private components = new Map<string, ComponentView>();
  private cuts: Record<Axis, number> = { x: 1, y: 1, z: 1 };
  selected: string | null = null;

  constructor(public extruder: ExtruderView) {
    this.cutPlanes = {
      x: new THREE.Plane(AXES.x.clone(), Infinity),
      y: new THREE.Plane(AXES.y.clone(), Infinity),
      z: new THREE.Plane(AXES.z.clone(), Infinity),
    };
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.8));
    const key = new THREE.DirectionalLight(0xffffff, 1.2);
    key.position.set(4, 8, 6);
    this.scene.add(key);
  }

  /** Place a loaded mesh at the component's annotated position. */
  addComponent(part: ComponentView, object: THREE.Object3D): void {
    if (!part.model) throw new Error(`component ${part.id} has no model`);
    const [x, y, z] = part.model.position;
    object.position.set(x, y, z);
    object.userData.componentId = part.id;
    object.traverse((child) => {
      const mesh = child as THREE.Mesh;
      if (mesh.isMesh) {
        const material = mesh.material as THREE.Material;
        material.clippingPlanes = Object.values(this.cutPlanes);
        material.clipShadows = true;
      }
    });
    this.scene.add(object);
    this.meshes.set(part.id, object);
    this.components.set(part.id, part);
  }

  componentIds(): string[] {
    return [...this.meshes.keys()];
  }

  object(componentId: string): THREE.Object3D | undefined {
    return this.meshes.get(componentId);
  }

  bounds(): THREE.Box3 {
    const box = new THREE.Box3();
    for (const object of this.meshes.values()) box.expandByObject(object);
    if (box.isEmpty()) box.set(new THREE.Vector3(-1, -1, -1), new THREE.Vector3(1, 1, 1));
    return box;
  }

  /** Slider position in [0, 1]: 1 shows everything, 0 cuts it all away. */
  setCut(axis: Axis, fraction: number): void {
    const clamped = Math.min(1, Math.max(0, fraction));
    this.cuts[axis] = clamped;
    if (clamped >= 1) {
      this.cutPlanes[axis].constant = Infinity;
      return;
    }
    const box = this.bounds();
    const min = box.min[axis];
    const max = box.max[axis];
    // Plane normal points toward negative axis: keep everything below the cut.
    this.cutPlanes[axis].constant = min + (max - min) * clamped;
  }

  cutState(): Record<Axis, number> {
    return { ...this.cuts };
  }

  resetCuts(): void {
    for (const axis of Object.keys(this.cuts) as Axis[]) this.setCut(axis, 1);
  }

  /** Component positions never move when cut planes change. */
  positionOf(componentId: string): [number, number, number] {
    const object = this.meshes.get(componentId);
    if (!object) throw new Error(`unknown component ${componentId}`);
    return [object.position.x, object.position.y, object.position.z];
  }

  select(componentId: string | null): SelectionInfo | null {
    if (componentId === null) {
      this.selected = null;
      return null;
    }
    const part = this.components.get(componentId);
    if (!part) throw new Error(`unknown component ${componentId}`);
    this.selected = componentId;
    return {
      componentId,
      type: part.type_label,
      model: part.label,
      brand: this.extruder.manufacturer,
    };
  }

  /** Resolve a picked object (e.g. from a raycast) to its component. */
  componentOf(object: THREE.Object3D): string | null {
    let node: THREE.Object3D | null = object;
    while (node) {
      if (typeof node.userData.componentId === "string") {
        return node.userData.componentId;
      }
      node = node.parent;
    }
    return null;
  }
}

export interface CameraState {
  theta: number;
  phi: number;
  radius: number;
  target: [number, number, number];
}

export class CameraRig {
  readonly camera: THREE.PerspectiveCamera;
  private theta = Math.PI / 4;
  private phi = Math.PI / 3;
  private radius = 8;
  private target = new THREE.Vector3(0, 0, 0);

  constructor(aspect = 16 / 9) {
    this.camera = new THREE.PerspectiveCamera(50, aspect, 0.01, 1000);
    this.apply();
  }

  state(): CameraState {
    return {
      theta: this.theta,
      phi: this.phi,
      radius: this.radius,
      target: [this.target.x, this.target.y, this.target.z],
    };
  }

  restore(state: CameraState): void {
    this.theta = state.theta;
    this.phi = state.phi;
    this.radius = state.radius;
    this.target.set(...state.target);
    this.apply();
  }

  rotate(deltaTheta: number, deltaPhi: number): void {
    this.theta += deltaTheta;
    this.phi = Math.min(Math.PI - 0.05, Math.max(0.05, this.phi + deltaPhi));
    this.apply();
  }

  zoom(factor: number): void {
    this.radius = Math.min(500, Math.max(0.1, this.radius * factor));
    this.apply();
  }

  pan(dx: number, dy: number): void {
    const right = new THREE.Vector3().setFromMatrixColumn(this.camera.matrix, 0);
    const up = new THREE.Vector3().setFromMatrixColumn(this.camera.matrix, 1);
    this.target.addScaledVector(right, dx).addScaledVector(up, dy);
    this.apply();
  }

  fit(box: THREE.Box3): void {
    const size = box.getSize(new THREE.Vector3()).length();
    box.getCenter(this.target);
    this.radius = Math.max(1, size * 1.4);
    this.apply();
  }

  private apply(): void {
    const sinPhi = Math.sin(this.phi);
    this.camera.position.set(
      this.target.x + this.radius * sinPhi * Math.cos(this.theta),
      this.target.y + this.radius * Math.cos(this.phi),
      this.target.z + this.radius * sinPhi * Math.sin(this.theta),
    );
    this.camera.lookAt(this.target);
    this.camera.updateMatrixWorld(true);
  }
}
