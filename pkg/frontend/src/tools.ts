/** Pointer-level sketching tools: freehand polylines and strike/dip placement.
 *
 * Strokes are vectorized while drawing: a pointer sample is kept only when it
 * moves at least minSpacingPx from the last kept vertex, so the backend sees
 * compact polylines instead of raw event streams.
 */

export interface PointerPt {
  x: number;
  y: number;
}

const DEFAULT_MIN_SPACING_PX = 3;

export class PolylineCapture {
  readonly minSpacingPx: number;
  private pts: PointerPt[] = [];
  private active = false;

  constructor(minSpacingPx: number = DEFAULT_MIN_SPACING_PX) {
    this.minSpacingPx = minSpacingPx;
  }

  get isActive(): boolean {
    return this.active;
  }

  get points(): readonly PointerPt[] {
    return this.pts;
  }

  begin(p: PointerPt): void {
    this.pts = [{ ...p }];
    this.active = true;
  }

  move(p: PointerPt): void {
    if (!this.active) return;
    const last = this.pts[this.pts.length - 1];
    if (Math.hypot(p.x - last.x, p.y - last.y) >= this.minSpacingPx) {
      this.pts.push({ ...p });
    }
  }

  /** Escape or pointer cancel: discard the stroke without mutating anything. */
  cancel(): void {
    this.pts = [];
    this.active = false;
  }

  /** Pointer up: the vectorized stroke, or null for a click without a drag. */
  finish(): PointerPt[] | null {
    const pts = this.pts;
    this.pts = [];
    this.active = false;
    return pts.length >= 2 ? pts : null;
  }
}

/** Azimuth (degrees clockwise from map north) of a map-space direction. */
export function azimuthOfVector(vx: number, vy: number): number {
  if (vx === 0 && vy === 0) return 0;
  const deg = (Math.atan2(vx, vy) * 180) / Math.PI;
  return deg < 0 ? deg + 360 : deg;
}

export interface DipDraft {
  position: PointerPt;
  strikeAzimuthDeg: number;
  dipDeg: number | null;
}

/** Two-step dip placement: click sets the position, dragging orients the
 * strike handle, and a dip angle is typed afterwards (rejected inline when
 * outside [0, 90)). Positions and drag vectors are in map coordinates. */
export class DipPlacement {
  private draft: DipDraft | null = null;

  get current(): DipDraft | null {
    return this.draft;
  }

  begin(position: PointerPt): void {
    this.draft = { position: { ...position }, strikeAzimuthDeg: 0, dipDeg: null };
  }

  dragStrike(toward: PointerPt): void {
    if (!this.draft) return;
    const vx = toward.x - this.draft.position.x;
    const vy = toward.y - this.draft.position.y;
    if (vx !== 0 || vy !== 0) this.draft.strikeAzimuthDeg = azimuthOfVector(vx, vy);
  }

  rotateStrike(deltaDeg: number): void {
    if (!this.draft) return;
    let a = (this.draft.strikeAzimuthDeg + deltaDeg) % 360;
    if (a < 0) a += 360;
    this.draft.strikeAzimuthDeg = a;
  }

  /** Returns an error message for inline display, or null when accepted. */
  setDip(dipDeg: number): string | null {
    if (!this.draft) return "no dip placement in progress";
    if (!(Number.isFinite(dipDeg) && dipDeg >= 0 && dipDeg < 90)) {
      return `dip must be in [0, 90), got ${dipDeg}`;
    }
    this.draft.dipDeg = dipDeg;
    return null;
  }

  cancel(): void {
    this.draft = null;
  }

  /** The completed draft, or null if the dip angle was never accepted. */
  finish(): DipDraft | null {
    const draft = this.draft;
    this.draft = null;
    return draft && draft.dipDeg !== null ? draft : null;
  }
}
