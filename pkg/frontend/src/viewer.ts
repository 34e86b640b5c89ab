/** 3D model view: turns the build artifact into colored surfaces.
 *
 * buildSceneSpec is pure (and unit-tested); ModelViewer renders the spec with
 * three.js in an orbitable viewport.
 */
import { ObjMesh, parseObj } from "./objparse.js";
import { SketchJson } from "./schema.js";

export type SurfaceRole = "terrain" | "horizon" | "base" | "skirt";

export interface SurfaceSpec {
  mesh: ObjMesh;
  role: SurfaceRole;
  /** horizon id or unit id the mesh belongs to, when applicable */
  subject: string | null;
  /** rgb in [0, 1] */
  color: [number, number, number];
}

const TERRAIN_COLOR: [number, number, number] = [0.55, 0.6, 0.45];
const BASE_COLOR: [number, number, number] = [0.35, 0.33, 0.3];

function unitColor(sketch: SketchJson, unitId: string): [number, number, number] {
  const unit = sketch.units.find((u) => u.id === unitId);
  if (!unit) return [0.7, 0.7, 0.7];
  return [unit.color[0] / 255, unit.color[1] / 255, unit.color[2] / 255];
}

/** Classify and color every OBJ object from a build result. Horizon surfaces
 * take the color of the unit they top; skirts take their unit's color. */
export function buildSceneSpec(objText: string, sketch: SketchJson): SurfaceSpec[] {
  const specs: SurfaceSpec[] = [];
  for (const mesh of parseObj(objText)) {
    if (mesh.name === "terrain") {
      specs.push({ mesh, role: "terrain", subject: null, color: TERRAIN_COLOR });
    } else if (mesh.name === "base") {
      specs.push({ mesh, role: "base", subject: null, color: BASE_COLOR });
    } else if (mesh.name.startsWith("horizon:")) {
      const horizonId = mesh.name.slice("horizon:".length);
      const horizon = sketch.horizons.find((h) => h.id === horizonId);
      specs.push({
        mesh,
        role: "horizon",
        subject: horizonId,
        color: horizon ? unitColor(sketch, horizon.below_unit) : [0.7, 0.7, 0.7],
      });
    } else if (mesh.name.startsWith("skirt:")) {
      const unitId = mesh.name.slice("skirt:".length);
      specs.push({ mesh, role: "skirt", subject: unitId, color: unitColor(sketch, unitId) });
    } else {
      specs.push({ mesh, role: "skirt", subject: null, color: [0.7, 0.7, 0.7] });
    }
  }
  return specs;
}

/** Terrain plus horizon surfaces; a successful build shows #horizons + 1. */
export function countSurfaces(specs: SurfaceSpec[]): number {
  return specs.filter((s) => s.role === "terrain" || s.role === "horizon").length;
}

export class ModelViewer {
  private container: HTMLElement;
  private three: typeof import("three") | null = null;
  private scene: import("three").Scene | null = null;
  private renderer: import("three").WebGLRenderer | null = null;
  private camera: import("three").PerspectiveCamera | null = null;
  private controls: { update(): void } | null = null;
  private surfaceGroup: import("three").Group | null = null;

  constructor(container: HTMLElement) {
    this.container = container;
  }

  /** Lazily create the WebGL context (kept out of the constructor so logic
   * tests never touch the DOM). */
  private async ensureScene() {
    if (this.scene) return;
    const THREE = await import("three");
    const { OrbitControls } = await import("three/examples/jsm/controls/OrbitControls.js");
    this.three = THREE;
    this.scene = new THREE.Scene();
    this.scene.background = new THREE.Color(0x1b1e23);
    const width = this.container.clientWidth || 640;
    const height = this.container.clientHeight || 480;
    this.camera = new THREE.PerspectiveCamera(50, width / height, 0.1, 1e7);
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setSize(width, height);
    this.container.appendChild(this.renderer.domElement);
    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.scene.add(new THREE.AmbientLight(0xffffff, 0.45));
    const sun = new THREE.DirectionalLight(0xffffff, 1.0);
    sun.position.set(1, -1, 2);
    this.scene.add(sun);
    const animate = () => {
      requestAnimationFrame(animate);
      this.controls?.update();
      if (this.renderer && this.scene && this.camera) this.renderer.render(this.scene, this.camera);
    };
    animate();
  }

  async showModel(objText: string, sketch: SketchJson): Promise<number> {
    await this.ensureScene();
    const THREE = this.three!;
    if (this.surfaceGroup) this.scene!.remove(this.surfaceGroup);
    const group = new THREE.Group();
    const specs = buildSceneSpec(objText, sketch);
    const bbox = new THREE.Box3();
    for (const spec of specs) {
      const geometry = new THREE.BufferGeometry();
      geometry.setAttribute("position", new THREE.BufferAttribute(spec.mesh.positions, 3));
      geometry.setIndex(new THREE.BufferAttribute(spec.mesh.indices, 1));
      geometry.computeVertexNormals();
      const material = new THREE.MeshLambertMaterial({
        color: new THREE.Color(...spec.color),
        side: THREE.DoubleSide,
        transparent: spec.role === "terrain",
        opacity: spec.role === "terrain" ? 0.85 : 1.0,
      });
      const mesh = new THREE.Mesh(geometry, material);
      group.add(mesh);
      geometry.computeBoundingBox();
      if (geometry.boundingBox) bbox.union(geometry.boundingBox);
    }
    // map x/y to the ground plane with z up
    group.rotation.x = -Math.PI / 2;
    this.scene!.add(group);
    this.surfaceGroup = group;

    const center = bbox.getCenter(new THREE.Vector3());
    const size = bbox.getSize(new THREE.Vector3()).length() || 1;
    this.camera!.position.set(center.x + size * 0.7, size * 0.6, center.y + size * 0.7);
    this.camera!.lookAt(center.x, 0, center.y);
    return countSurfaces(specs);
  }
}
