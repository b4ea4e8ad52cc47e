import * as THREE from "three";
import { beforeEach, describe, expect, it } from "vitest";

import { CameraRig, ExtruderScene } from "../src/viewer.js";
import type { ComponentView, ExtruderView } from "../src/types.js";

function part(id: string, position: [number, number, number]): ComponentView {
  return {
    id,
    type_class: `http://vocab.test#${id}`,
    type_label: `Type of ${id}`,
    label: `Label of ${id}`,
    properties: [],
    model: { file_path: `assets/${id}.gltf`, format: "glTF", position },
  };
}

const EXTRUDER: ExtruderView = {
  id: "http://inst.test#E01",
  name: "BlowMax 250",
  manufacturer: "Lezo Machinery Works",
  description: "",
  production: "",
  bottles_per_hour: 1300,
  visible: true,
  parts: [part("hopper", [0, 0, -1]), part("screw", [0.4, 0.3, 1.2])],
};

function cube(): THREE.Mesh {
  return new THREE.Mesh(
    new THREE.BoxGeometry(1, 1, 1),
    new THREE.MeshStandardMaterial(),
  );
}

describe("extruder scene", () => {
  let scene: ExtruderScene;

  beforeEach(() => {
    scene = new ExtruderScene(EXTRUDER);
    scene.addComponent(EXTRUDER.parts[0], cube());
    scene.addComponent(EXTRUDER.parts[1], cube());
  });

  it("places components at their annotated coordinates", () => {
    expect(scene.positionOf("hopper")).toEqual([0, 0, -1]);
    expect(scene.positionOf("screw")).toEqual([0.4, 0.3, 1.2]);
  });

  it("meshes share the three axis-aligned cut planes", () => {
    const object = scene.object("hopper")!;
    const mesh = object as THREE.Mesh;
    const material = mesh.material as THREE.Material;
    expect(material.clippingPlanes).toHaveLength(3);
    expect(material.clippingPlanes).toContain(scene.cutPlanes.x);
  });

  it("cut sliders move plane constants inside the scene bounds", () => {
    scene.setCut("x", 0.5);
    const box = scene.bounds();
    const expected = box.min.x + (box.max.x - box.min.x) * 0.5;
    expect(scene.cutPlanes.x.constant).toBeCloseTo(expected);
    scene.setCut("x", 1);
    expect(scene.cutPlanes.x.constant).toBe(Infinity);
  });

  it("cuts only alter rendering state; geometry never moves", () => {
    const before = {
      hopper: scene.positionOf("hopper"),
      screw: scene.positionOf("screw"),
      children: scene.scene.children.length,
    };
    scene.setCut("x", 0.2);
    scene.setCut("y", 0.7);
    scene.setCut("z", 0.0);
    expect(scene.positionOf("hopper")).toEqual(before.hopper);
    expect(scene.positionOf("screw")).toEqual(before.screw);
    expect(scene.scene.children.length).toBe(before.children);
  });

  it("round-tripping the sliders restores the initial view", () => {
    const initial = {
      x: scene.cutPlanes.x.constant,
      y: scene.cutPlanes.y.constant,
      z: scene.cutPlanes.z.constant,
    };
    scene.setCut("x", 0.3);
    scene.setCut("y", 0.1);
    scene.setCut("z", 0.9);
    scene.resetCuts();
    expect(scene.cutPlanes.x.constant).toBe(initial.x);
    expect(scene.cutPlanes.y.constant).toBe(initial.y);
    expect(scene.cutPlanes.z.constant).toBe(initial.z);
    expect(scene.cutState()).toEqual({ x: 1, y: 1, z: 1 });
  });

  it("selection shows type, model and brand", () => {
    const info = scene.select("screw");
    expect(info).toEqual({
      componentId: "screw",
      type: "Type of screw",
      model: "Label of screw",
      brand: "Lezo Machinery Works",
    });
    expect(scene.select(null)).toBeNull();
    expect(scene.selected).toBeNull();
  });

  it("resolves picked child objects to their component", () => {
    const object = scene.object("hopper")!;
    const child = new THREE.Object3D();
    object.add(child);
    expect(scene.componentOf(child)).toBe("hopper");
    expect(scene.componentOf(new THREE.Object3D())).toBeNull();
  });
});

describe("camera rig", () => {
  it("zoom changes the distance to the target", () => {
    const rig = new CameraRig();
    const before = rig.camera.position.length();
    rig.zoom(0.5);
    expect(rig.camera.position.length()).toBeLessThan(before);
  });

  it("rotate keeps the distance constant", () => {
    const rig = new CameraRig();
    const before = rig.state().radius;
    rig.rotate(0.3, -0.2);
    expect(rig.state().radius).toBe(before);
  });

  it("state round trip restores the exact camera position", () => {
    const rig = new CameraRig();
    const saved = rig.state();
    const position = rig.camera.position.clone();
    rig.rotate(1.0, 0.4);
    rig.zoom(2);
    rig.pan(0.5, -0.2);
    rig.restore(saved);
    expect(rig.camera.position.distanceTo(position)).toBeLessThan(1e-9);
  });

  it("fit centres the target on the bounding box", () => {
    const rig = new CameraRig();
    const box = new THREE.Box3(
      new THREE.Vector3(-2, 0, -2),
      new THREE.Vector3(2, 4, 2),
    );
    rig.fit(box);
    expect(rig.state().target).toEqual([0, 2, 0]);
  });
});
