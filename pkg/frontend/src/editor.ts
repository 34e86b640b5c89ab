/** 2D map editor: viewport math and canvas rendering of the sketch. */
import { SketchDocument } from "./document.js";
import { SketchJson, Vec2 } from "./schema.js";
import { PointerPt } from "./tools.js";

/** Maps between map meters (y up) and canvas pixels (y down), preserving
 * aspect ratio and centering the bounds. */
export class Viewport {
  readonly scale: number; // px per meter
  readonly offsetX: number;
  readonly offsetY: number;

  constructor(
    readonly widthPx: number,
    readonly heightPx: number,
    readonly bounds: { min: Vec2; max: Vec2 },
    marginPx = 20,
  ) {
    const w = bounds.max[0] - bounds.min[0];
    const h = bounds.max[1] - bounds.min[1];
    this.scale = Math.min((widthPx - 2 * marginPx) / w, (heightPx - 2 * marginPx) / h);
    this.offsetX = (widthPx - w * this.scale) / 2 - bounds.min[0] * this.scale;
    this.offsetY = (heightPx + h * this.scale) / 2 + bounds.min[1] * this.scale;
  }

  toCanvas(p: Vec2): PointerPt {
    return { x: p[0] * this.scale + this.offsetX, y: this.offsetY - p[1] * this.scale };
  }

  toMap(p: PointerPt): Vec2 {
    return [(p.x - this.offsetX) / this.scale, (this.offsetY - p.y) / this.scale];
  }
}

function cssColor(rgb: [number, number, number], alpha = 1): string {
  return `rgba(${rgb[0]}, ${rgb[1]}, ${rgb[2]}, ${alpha})`;
}

export class MapEditorView {
  constructor(
    private canvas: HTMLCanvasElement,
    private doc: SketchDocument,
  ) {}

  viewport(): Viewport {
    return new Viewport(this.canvas.width, this.canvas.height, this.doc.sketch.bounds);
  }

  render(strokePreview: readonly PointerPt[] = []): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const sketch = this.doc.sketch;
    const vp = this.viewport();
    ctx.clearRect(0, 0, this.canvas.width, this.canvas.height);

    ctx.fillStyle = "#f4f1e8";
    const tl = vp.toCanvas([sketch.bounds.min[0], sketch.bounds.max[1]]);
    const br = vp.toCanvas([sketch.bounds.max[0], sketch.bounds.min[1]]);
    ctx.fillRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);
    ctx.strokeStyle = "#8a8577";
    ctx.strokeRect(tl.x, tl.y, br.x - tl.x, br.y - tl.y);

    for (const contour of sketch.contours) {
      this.drawPolyline(ctx, vp, contour.points, contour.closed, "#7b6f58", 1);
      const at = vp.toCanvas(contour.points[0]);
      ctx.fillStyle = "#7b6f58";
      ctx.font = "10px sans-serif";
      ctx.fillText(String(contour.elevation), at.x + 3, at.y - 3);
    }

    for (const boundary of sketch.boundaries) {
      const younger = sketch.units.find((u) => u.id === boundary.younger_unit);
      const highlight =
        this.doc.highlightedUnits.has(boundary.younger_unit) ||
        this.doc.highlightedUnits.has(boundary.older_unit);
      const color = highlight ? "#e03535" : cssColor(younger?.color ?? [60, 60, 60]);
      this.drawPolyline(ctx, vp, boundary.points, boundary.closed, color, highlight ? 3 : 2);
    }

    for (const dip of sketch.dips) {
      this.drawDipGlyph(ctx, vp, dip.position, dip.strike_azimuth_deg, dip.dip_deg);
    }

    if (strokePreview.length > 1) {
      ctx.strokeStyle = "#3b6ea5";
      ctx.setLineDash([4, 3]);
      ctx.beginPath();
      ctx.moveTo(strokePreview[0].x, strokePreview[0].y);
      for (const p of strokePreview.slice(1)) ctx.lineTo(p.x, p.y);
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }

  private drawPolyline(
    ctx: CanvasRenderingContext2D,
    vp: Viewport,
    points: Vec2[],
    closed: boolean,
    style: string,
    width: number,
  ): void {
    ctx.strokeStyle = style;
    ctx.lineWidth = width;
    ctx.beginPath();
    const first = vp.toCanvas(points[0]);
    ctx.moveTo(first.x, first.y);
    for (const p of points.slice(1)) {
      const c = vp.toCanvas(p);
      ctx.lineTo(c.x, c.y);
    }
    if (closed) ctx.closePath();
    ctx.stroke();
  }

  /** Standard strike/dip glyph: strike bar, short tick down-dip, dip label. */
  private drawDipGlyph(
    ctx: CanvasRenderingContext2D,
    vp: Viewport,
    position: Vec2,
    strikeDeg: number,
    dipDeg: number,
  ): void {
    const c = vp.toCanvas(position);
    const strike = (strikeDeg * Math.PI) / 180;
    // map azimuth a -> canvas direction (sin a, -cos a); canvas y is down
    const sx = Math.sin(strike);
    const sy = -Math.cos(strike);
    const dipAz = strike + Math.PI / 2;
    const dx = Math.sin(dipAz);
    const dy = -Math.cos(dipAz);
    const bar = 12;
    const tick = 5;
    ctx.strokeStyle = "#222";
    ctx.lineWidth = 1.5;
    ctx.beginPath();
    ctx.moveTo(c.x - bar * sx, c.y - bar * sy);
    ctx.lineTo(c.x + bar * sx, c.y + bar * sy);
    ctx.moveTo(c.x, c.y);
    ctx.lineTo(c.x + tick * dx, c.y + tick * dy);
    ctx.stroke();
    ctx.fillStyle = "#222";
    ctx.font = "10px sans-serif";
    ctx.fillText(String(dipDeg), c.x + (tick + 3) * dx, c.y + (tick + 3) * dy);
  }
}
