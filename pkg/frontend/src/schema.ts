/** Sketch JSON schema shared with the backend (version 1). */

export type Vec2 = [number, number];

export interface UnitJson {
  id: string;
  name: string;
  color: [number, number, number];
}

export type HorizonKind = "DEPOSIT" | "ERODE";

export interface HorizonJson {
  id: string;
  kind: HorizonKind;
  below_unit: string;
}

export interface ContourJson {
  elevation: number;
  points: Vec2[];
  closed: boolean;
}

export interface BoundaryJson {
  horizon: string;
  older_unit: string;
  younger_unit: string;
  points: Vec2[];
  closed: boolean;
}

export interface DipJson {
  horizon: string;
  position: Vec2;
  strike_azimuth_deg: number;
  dip_deg: number;
}

export type RelationKind = "ABOVE" | "CUTS";

export interface RelationJson {
  younger: string;
  older: string;
  kind: RelationKind;
}

export interface SketchJson {
  version: 1;
  bounds: { min: Vec2; max: Vec2 };
  datum_elevation: number;
  units: UnitJson[];
  horizons: HorizonJson[];
  contours: ContourJson[];
  boundaries: BoundaryJson[];
  dips: DipJson[];
  relations: RelationJson[];
}

export function emptySketch(min: Vec2, max: Vec2, datum = 0): SketchJson {
  return {
    version: 1,
    bounds: { min: [...min], max: [...max] },
    datum_elevation: datum,
    units: [],
    horizons: [],
    contours: [],
    boundaries: [],
    dips: [],
    relations: [],
  };
}

/** Deep structural clone; sketch documents are plain JSON data. */
export function cloneSketch(sketch: SketchJson): SketchJson {
  return JSON.parse(JSON.stringify(sketch)) as SketchJson;
}

export function sketchesEqual(a: SketchJson, b: SketchJson): boolean {
  return JSON.stringify(a) === JSON.stringify(b);
}
