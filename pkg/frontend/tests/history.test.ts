/** Undo/redo inverse property over randomized edit scripts. */
import { describe, expect, test } from "vitest";

import { SketchDocument } from "../src/document.js";
import { SketchJson } from "../src/schema.js";
import { mulberry32, pick, randInt } from "./prng.js";

type Rand = () => number;

function randomEdit(doc: SketchDocument, rand: Rand, counter: { n: number }): void {
  const choices: (() => void)[] = [
    () => doc.setDatumElevation(randInt(rand, -100, 100)),
    () => doc.addUnit({ id: `u${counter.n++}`, name: "U", color: [randInt(rand, 0, 256), 0, 0] }),
    () =>
      doc.addContour(
        [
          [rand() * 100, rand() * 100],
          [rand() * 100, rand() * 100],
          [rand() * 100, rand() * 100],
        ],
        randInt(rand, 0, 300),
        rand() < 0.3,
      ),
  ];
  const units = doc.sketch.units;
  if (units.length >= 1) {
    choices.push(() =>
      doc.addHorizon({ id: `h${counter.n++}`, kind: rand() < 0.5 ? "DEPOSIT" : "ERODE", below_unit: pick(rand, units).id }),
    );
  }
  if (units.length >= 2) {
    choices.push(() => {
      const younger = pick(rand, units).id;
      const others = units.filter((u) => u.id !== younger);
      doc.addRelation(younger, pick(rand, others).id, rand() < 0.8 ? "ABOVE" : "CUTS");
    });
  }
  if (doc.sketch.horizons.length >= 1) {
    choices.push(() =>
      doc.addDip(
        [rand() * 100, rand() * 100],
        randInt(rand, 0, 360),
        randInt(rand, 0, 90),
        pick(rand, doc.sketch.horizons).id,
      ),
    );
    if (units.length >= 2) {
      choices.push(() => {
        const older = units[0].id;
        const younger = units[1].id;
        doc.addBoundary(
          [
            [rand() * 100, rand() * 100],
            [rand() * 100, rand() * 100],
          ],
          pick(rand, doc.sketch.horizons).id,
          older,
          younger,
        );
      });
    }
  }
  pick(rand, choices)();
}

describe("undo/redo property", () => {
  test("undo and redo are exact inverses over 100 random edit scripts", () => {
    for (let script = 0; script < 100; script++) {
      const rand = mulberry32(1000 + script);
      const doc = new SketchDocument();
      const counter = { n: 0 };
      // reference model: the full snapshot list and a cursor
      const states: SketchJson[] = [doc.toJson()];
      let cursor = 0;

      const steps = randInt(rand, 5, 40);
      for (let k = 0; k < steps; k++) {
        const roll = rand();
        if (roll < 0.55) {
          randomEdit(doc, rand, counter);
          states.length = cursor + 1;
          states.push(doc.toJson());
          cursor += 1;
        } else if (roll < 0.8) {
          const expected = cursor > 0;
          expect(doc.undo()).toBe(expected);
          if (expected) cursor -= 1;
        } else {
          const expected = cursor < states.length - 1;
          expect(doc.redo()).toBe(expected);
          if (expected) cursor += 1;
        }
        expect(doc.toJson()).toEqual(states[cursor]);
        expect(doc.canUndo).toBe(cursor > 0);
        expect(doc.canRedo).toBe(cursor < states.length - 1);
      }

      // unwind everything: undo to the empty document, redo back to the tip
      while (doc.undo()) cursor -= 1;
      expect(cursor).toBe(0);
      expect(doc.toJson()).toEqual(states[0]);
      while (doc.redo()) cursor += 1;
      expect(cursor).toBe(states.length - 1);
      expect(doc.toJson()).toEqual(states[states.length - 1]);
    }
  });

  test("a new edit discards the redo branch", () => {
    const doc = new SketchDocument();
    doc.setDatumElevation(1);
    doc.setDatumElevation(2);
    doc.undo();
    expect(doc.canRedo).toBe(true);
    doc.setDatumElevation(3);
    expect(doc.canRedo).toBe(false);
    expect(doc.sketch.datum_elevation).toBe(3);
    doc.undo();
    expect(doc.sketch.datum_elevation).toBe(1);
  });
});
