/** Sketch document store: edits, selection, and an undo/redo history.
 *
 * The history keeps immutable snapshots of the sketch data; undo and redo are
 * exact inverses over that state. UI state (active tool, selection) is not
 * part of the undo history.
 */
import {
  BoundaryJson,
  ContourJson,
  DipJson,
  HorizonJson,
  HorizonKind,
  RelationJson,
  RelationKind,
  SketchJson,
  UnitJson,
  Vec2,
  cloneSketch,
  emptySketch,
} from "./schema.js";

export type Tool = "select" | "contour" | "boundary" | "dip" | "relation";

export type ElementRef =
  | { kind: "contour"; index: number }
  | { kind: "boundary"; index: number }
  | { kind: "dip"; index: number }
  | { kind: "relation"; index: number };

export class SketchDocument {
  activeTool: Tool = "select";
  selected: ElementRef | null = null;
  highlightedUnits: Set<string> = new Set();

  private history: SketchJson[];
  private cursor = 0;

  constructor(initial?: SketchJson) {
    this.history = [initial ? cloneSketch(initial) : emptySketch([0, 0], [1000, 1000])];
  }

  get sketch(): SketchJson {
    return this.history[this.cursor];
  }

  /** Serialize losslessly to the backend sketch schema. */
  toJson(): SketchJson {
    return cloneSketch(this.sketch);
  }

  /** Replace the document with a loaded sketch; history starts fresh. */
  loadSketch(sketch: SketchJson): void {
    this.history = [cloneSketch(sketch)];
    this.cursor = 0;
    this.selected = null;
    this.highlightedUnits = new Set();
  }

  get canUndo(): boolean {
    return this.cursor > 0;
  }

  get canRedo(): boolean {
    return this.cursor < this.history.length - 1;
  }

  undo(): boolean {
    if (!this.canUndo) return false;
    this.cursor -= 1;
    return true;
  }

  redo(): boolean {
    if (!this.canRedo) return false;
    this.cursor += 1;
    return true;
  }

  /** Apply an edit as a new history snapshot; redo states are discarded. */
  private commit(mutate: (draft: SketchJson) => void): void {
    const draft = cloneSketch(this.sketch);
    mutate(draft);
    this.history = this.history.slice(0, this.cursor + 1);
    this.history.push(draft);
    this.cursor += 1;
  }

  setBounds(min: Vec2, max: Vec2): void {
    if (!(max[0] > min[0] && max[1] > min[1])) throw new Error("bounds must have positive extent");
    this.commit((d) => {
      d.bounds = { min: [...min], max: [...max] };
    });
  }

  setDatumElevation(z: number): void {
    this.commit((d) => {
      d.datum_elevation = z;
    });
  }

  addUnit(unit: UnitJson): void {
    if (!unit.id) throw new Error("unit id must be non-empty");
    if (this.sketch.units.some((u) => u.id === unit.id)) throw new Error(`duplicate unit id "${unit.id}"`);
    this.commit((d) => {
      d.units.push({ ...unit, color: [...unit.color] });
    });
  }

  addHorizon(horizon: HorizonJson): void {
    if (this.sketch.horizons.some((h) => h.id === horizon.id))
      throw new Error(`duplicate horizon id "${horizon.id}"`);
    this.requireUnit(horizon.below_unit);
    this.commit((d) => {
      d.horizons.push({ ...horizon });
    });
  }

  addContour(points: Vec2[], elevation: number, closed = false): void {
    if (points.length < 2) throw new Error("contour needs at least 2 points");
    this.commit((d) => {
      d.contours.push({ elevation, points: points.map((p) => [...p] as Vec2), closed });
    });
  }

  addBoundary(points: Vec2[], horizon: string, olderUnit: string, youngerUnit: string, closed = false): void {
    if (points.length < 2) throw new Error("boundary needs at least 2 points");
    this.requireHorizon(horizon);
    this.requireUnit(olderUnit);
    this.requireUnit(youngerUnit);
    if (olderUnit === youngerUnit) throw new Error("older and younger unit must differ");
    this.commit((d) => {
      d.boundaries.push({
        horizon,
        older_unit: olderUnit,
        younger_unit: youngerUnit,
        points: points.map((p) => [...p] as Vec2),
        closed,
      });
    });
  }

  addDip(position: Vec2, strikeAzimuthDeg: number, dipDeg: number, horizon: string): void {
    if (!(dipDeg >= 0 && dipDeg < 90)) throw new Error(`dip ${dipDeg} outside [0, 90)`);
    this.requireHorizon(horizon);
    const strike = normalizeAzimuth(strikeAzimuthDeg);
    this.commit((d) => {
      d.dips.push({ horizon, position: [...position], strike_azimuth_deg: strike, dip_deg: dipDeg });
    });
  }

  /** Rotate an existing dip symbol's strike handle. */
  rotateDipStrike(index: number, deltaDeg: number): void {
    const dip = this.sketch.dips[index];
    if (!dip) throw new Error(`no dip at index ${index}`);
    this.commit((d) => {
      d.dips[index].strike_azimuth_deg = normalizeAzimuth(dip.strike_azimuth_deg + deltaDeg);
    });
  }

  addRelation(younger: string, older: string, kind: RelationKind = "ABOVE"): void {
    this.requireUnit(younger);
    this.requireUnit(older);
    if (younger === older) throw new Error("relation endpoints must differ");
    this.commit((d) => {
      d.relations.push({ younger, older, kind });
    });
  }

  removeElement(ref: ElementRef): void {
    this.commit((d) => {
      const list = {
        contour: d.contours,
        boundary: d.boundaries,
        dip: d.dips,
        relation: d.relations,
      }[ref.kind] as unknown[];
      if (ref.index < 0 || ref.index >= list.length) throw new Error("element out of range");
      list.splice(ref.index, 1);
    });
    this.selected = null;
  }

  private requireUnit(id: string): void {
    if (!this.sketch.units.some((u) => u.id === id)) throw new Error(`unknown unit "${id}"`);
  }

  private requireHorizon(id: string): void {
    if (!this.sketch.horizons.some((h) => h.id === id)) throw new Error(`unknown horizon "${id}"`);
  }
}

export function normalizeAzimuth(deg: number): number {
  let a = deg % 360;
  if (a < 0) a += 360;
  return a === 360 ? 0 : a;
}

export type { HorizonKind, SketchJson, UnitJson, HorizonJson, ContourJson, BoundaryJson, DipJson, RelationJson };
