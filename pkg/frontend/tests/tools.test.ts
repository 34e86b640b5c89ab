import { describe, expect, test } from "vitest";

import { DipPlacement, PolylineCapture, azimuthOfVector } from "../src/tools.js";

describe("polyline capture", () => {
  test("downsamples a 400 px drag of 200 events to at most 134 vertices", () => {
    const capture = new PolylineCapture(3);
    capture.begin({ x: 0, y: 100 });
    for (let k = 1; k < 200; k++) {
      capture.move({ x: (400 * k) / 199, y: 100 });
    }
    const stroke = capture.finish();
    expect(stroke).not.toBeNull();
    expect(stroke!.length).toBeLessThanOrEqual(134);
    expect(stroke!.length).toBeGreaterThan(50); // still densely sampled
    for (let i = 1; i < stroke!.length; i++) {
      const dx = stroke![i].x - stroke![i - 1].x;
      const dy = stroke![i].y - stroke![i - 1].y;
      expect(Math.hypot(dx, dy)).toBeGreaterThanOrEqual(3);
    }
  });

  test("a single click produces no element", () => {
    const capture = new PolylineCapture();
    capture.begin({ x: 10, y: 10 });
    expect(capture.finish()).toBeNull();
  });

  test("jitter below the spacing threshold produces no element", () => {
    const capture = new PolylineCapture(3);
    capture.begin({ x: 10, y: 10 });
    capture.move({ x: 11, y: 10 });
    capture.move({ x: 10.5, y: 11 });
    expect(capture.finish()).toBeNull();
  });

  test("cancel discards the stroke", () => {
    const capture = new PolylineCapture();
    capture.begin({ x: 0, y: 0 });
    capture.move({ x: 50, y: 0 });
    capture.cancel();
    expect(capture.isActive).toBe(false);
    expect(capture.finish()).toBeNull();
  });
});

describe("azimuth math", () => {
  test("cardinal directions", () => {
    expect(azimuthOfVector(0, 1)).toBeCloseTo(0, 9); // north
    expect(azimuthOfVector(1, 0)).toBeCloseTo(90, 9); // east
    expect(azimuthOfVector(0, -1)).toBeCloseTo(180, 9); // south
    expect(azimuthOfVector(-1, 0)).toBeCloseTo(270, 9); // west
  });
});

describe("dip placement", () => {
  test("accepts a valid dip and orients to the drag", () => {
    const placement = new DipPlacement();
    placement.begin({ x: 10, y: 10 });
    placement.dragStrike({ x: 10, y: 30 }); // due north
    expect(placement.setDip(30)).toBeNull();
    const draft = placement.finish();
    expect(draft).not.toBeNull();
    expect(draft!.strikeAzimuthDeg).toBeCloseTo(0, 9);
    expect(draft!.dipDeg).toBe(30);
  });

  test("rejects dip angles outside [0, 90) inline", () => {
    const placement = new DipPlacement();
    placement.begin({ x: 0, y: 0 });
    expect(placement.setDip(95)).toMatch(/\[0, 90\)/);
    expect(placement.setDip(90)).toMatch(/\[0, 90\)/);
    expect(placement.setDip(-1)).toMatch(/\[0, 90\)/);
    expect(placement.finish()).toBeNull(); // never accepted, no element
  });

  test("rotating the strike handle by 90 changes the azimuth by 90", () => {
    const placement = new DipPlacement();
    placement.begin({ x: 0, y: 0 });
    placement.dragStrike({ x: 1, y: 0 }); // east = 90
    placement.rotateStrike(90);
    expect(placement.current!.strikeAzimuthDeg).toBeCloseTo(180, 9);
  });

  test("cancel leaves nothing to finish", () => {
    const placement = new DipPlacement();
    placement.begin({ x: 0, y: 0 });
    placement.setDip(10);
    placement.cancel();
    expect(placement.finish()).toBeNull();
  });
});
