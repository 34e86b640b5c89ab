import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, test } from "vitest";

import { SketchDocument } from "../src/document.js";
import { SketchJson, sketchesEqual } from "../src/schema.js";
import { scriptEditsFrom } from "./scripted_edits.js";

const FIXTURE_DIR = join(__dirname, "..", "..", "fixtures");

function loadFixture(name: string): SketchJson {
  return JSON.parse(readFileSync(join(FIXTURE_DIR, name), "utf-8")) as SketchJson;
}

describe("document editing", () => {
  test("starts empty and buildable", () => {
    const doc = new SketchDocument();
    expect(doc.sketch.version).toBe(1);
    expect(doc.sketch.units).toEqual([]);
    expect(doc.canUndo).toBe(false);
    expect(doc.canRedo).toBe(false);
  });

  test("rejects invalid edits without mutating", () => {
    const doc = new SketchDocument();
    doc.addUnit({ id: "a", name: "A", color: [1, 2, 3] });
    const before = doc.toJson();
    expect(() => doc.addUnit({ id: "a", name: "again", color: [0, 0, 0] })).toThrow(/duplicate/);
    expect(() => doc.addContour([[0, 0]], 5)).toThrow(/2 points/);
    expect(() => doc.addRelation("a", "a")).toThrow(/differ/);
    expect(() => doc.addDip([1, 1], 0, 95, "missing")).toThrow(/dip 95/);
    expect(doc.toJson()).toEqual(before);
  });

  test("dip strike azimuth normalizes into [0, 360)", () => {
    const doc = new SketchDocument();
    doc.addUnit({ id: "a", name: "A", color: [1, 2, 3] });
    doc.addHorizon({ id: "h", kind: "DEPOSIT", below_unit: "a" });
    doc.addDip([5, 5], 350, 30, "h");
    doc.rotateDipStrike(0, 90);
    expect(doc.sketch.dips[0].strike_azimuth_deg).toBe(80);
  });

  test("rotating a strike handle by 90 changes azimuth by 90", () => {
    const doc = new SketchDocument();
    doc.addUnit({ id: "a", name: "A", color: [1, 2, 3] });
    doc.addHorizon({ id: "h", kind: "DEPOSIT", below_unit: "a" });
    doc.addDip([5, 5], 30, 45, "h");
    doc.rotateDipStrike(0, 90);
    expect(doc.sketch.dips[0].strike_azimuth_deg).toBe(120);
  });

  test("serialized dip uses the schema field names", () => {
    const doc = new SketchDocument();
    doc.addUnit({ id: "a", name: "A", color: [1, 2, 3] });
    doc.addHorizon({ id: "h", kind: "DEPOSIT", below_unit: "a" });
    doc.addDip([5, 5], 0, 30, "h");
    expect(doc.toJson().dips[0]).toEqual({
      horizon: "h",
      position: [5, 5],
      strike_azimuth_deg: 0,
      dip_deg: 30,
    });
  });

  test("undo after a draw restores the pre-draw document", () => {
    const doc = new SketchDocument();
    doc.addUnit({ id: "a", name: "A", color: [1, 2, 3] });
    const before = doc.toJson();
    doc.addContour(
      [
        [0, 0],
        [10, 10],
      ],
      42,
    );
    expect(doc.sketch.contours).toHaveLength(1);
    expect(doc.undo()).toBe(true);
    expect(doc.toJson()).toEqual(before);
  });

  test("loadSketch resets history", () => {
    const doc = new SketchDocument();
    doc.addUnit({ id: "a", name: "A", color: [1, 2, 3] });
    doc.loadSketch(loadFixture("cyclic_relations.json"));
    expect(doc.canUndo).toBe(false);
    expect(doc.sketch.units).toHaveLength(3);
  });
});

describe("golden fixture conformance", () => {
  const names = readdirSync(FIXTURE_DIR).filter((n) => n.endsWith(".json"));

  test("all fixtures present", () => {
    expect(names.length).toBeGreaterThanOrEqual(4);
  });

  for (const name of names) {
    test(`scripted edits reproduce ${name} exactly`, () => {
      const target = loadFixture(name);
      const doc = scriptEditsFrom(target);
      expect(doc.toJson()).toEqual(target);
      expect(sketchesEqual(doc.toJson(), doc.toJson())).toBe(true);
    });
  }
});
