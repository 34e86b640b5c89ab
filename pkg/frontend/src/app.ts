/** Application shell: tool handling, build triggering, toasts, and the 3D view. */
import { BuildOutcome, GeosketcherClient, highlightedUnits } from "./api.js";
import { SketchDocument, Tool } from "./document.js";
import { MapEditorView } from "./editor.js";
import { SketchJson, Vec2 } from "./schema.js";
import { DipPlacement, PolylineCapture, PointerPt } from "./tools.js";
import { ModelViewer } from "./viewer.js";

const AUTO_BUILD_DEBOUNCE_MS = 800;

export interface Prompts {
  elevation(): number | null;
  boundaryMeta(doc: SketchDocument): { horizon: string; older: string; younger: string } | null;
  dipAngle(): number | null;
  dipHorizon(doc: SketchDocument): string | null;
}

const windowPrompts: Prompts = {
  elevation() {
    const raw = window.prompt("Contour elevation (m):");
    if (raw === null) return null;
    const v = Number(raw);
    return Number.isFinite(v) ? v : null;
  },
  boundaryMeta(doc) {
    const horizon = window.prompt(`Horizon id (${doc.sketch.horizons.map((h) => h.id).join(", ")}):`);
    if (!horizon) return null;
    const older = window.prompt("Older unit id:");
    if (!older) return null;
    const younger = window.prompt("Younger unit id:");
    if (!younger) return null;
    return { horizon, older, younger };
  },
  dipAngle() {
    const raw = window.prompt("Dip angle (degrees, 0-89):");
    if (raw === null) return null;
    const v = Number(raw);
    return Number.isFinite(v) ? v : null;
  },
  dipHorizon(doc) {
    return window.prompt(`Horizon id (${doc.sketch.horizons.map((h) => h.id).join(", ")}):`);
  },
};

export class App {
  readonly doc: SketchDocument;
  readonly client: GeosketcherClient;
  private view: MapEditorView;
  private viewer: ModelViewer;
  private capture = new PolylineCapture();
  private dip = new DipPlacement();
  private prompts: Prompts;
  private autoBuild = false;
  private buildTimer: number | null = null;
  private toastEl: HTMLElement;

  constructor(
    root: HTMLElement,
    client: GeosketcherClient,
    initial?: SketchJson,
    prompts: Prompts = windowPrompts,
  ) {
    this.client = client;
    this.prompts = prompts;
    this.doc = new SketchDocument(initial);

    root.innerHTML = `
      <div class="toolbar">
        <button data-tool="select">select</button>
        <button data-tool="contour">contour</button>
        <button data-tool="boundary">boundary</button>
        <button data-tool="dip">strike/dip</button>
        <button id="undo">undo</button>
        <button id="redo">redo</button>
        <label><input type="checkbox" id="auto"> auto-build</label>
        <button id="build">build</button>
        <button id="save">save</button>
        <input type="file" id="load" accept=".json" hidden>
        <button id="load-btn">load</button>
      </div>
      <div class="panes">
        <canvas id="map" width="720" height="720"></canvas>
        <div id="model"></div>
      </div>
      <div id="toast"></div>`;

    const canvas = root.querySelector<HTMLCanvasElement>("#map")!;
    this.view = new MapEditorView(canvas, this.doc);
    this.viewer = new ModelViewer(root.querySelector<HTMLElement>("#model")!);
    this.toastEl = root.querySelector<HTMLElement>("#toast")!;

    for (const btn of root.querySelectorAll<HTMLButtonElement>("[data-tool]")) {
      btn.addEventListener("click", () => {
        this.doc.activeTool = btn.dataset.tool as Tool;
      });
    }
    root.querySelector("#undo")!.addEventListener("click", () => {
      if (this.doc.undo()) this.afterEdit();
    });
    root.querySelector("#redo")!.addEventListener("click", () => {
      if (this.doc.redo()) this.afterEdit();
    });
    root.querySelector("#build")!.addEventListener("click", () => void this.requestBuild());
    const auto = root.querySelector<HTMLInputElement>("#auto")!;
    auto.addEventListener("change", () => {
      this.autoBuild = auto.checked;
    });
    root.querySelector("#save")!.addEventListener("click", () => this.saveToFile());
    const fileInput = root.querySelector<HTMLInputElement>("#load")!;
    root.querySelector("#load-btn")!.addEventListener("click", () => fileInput.click());
    fileInput.addEventListener("change", () => void this.loadFromFile(fileInput));

    canvas.addEventListener("pointerdown", (e) => this.onPointerDown(this.eventPt(canvas, e)));
    canvas.addEventListener("pointermove", (e) => this.onPointerMove(this.eventPt(canvas, e)));
    canvas.addEventListener("pointerup", () => void this.onPointerUp());
    window.addEventListener("keydown", (e) => {
      if (e.key === "Escape") {
        this.capture.cancel();
        this.dip.cancel();
        this.view.render();
      }
    });
    this.view.render();
  }

  private eventPt(canvas: HTMLCanvasElement, e: PointerEvent): PointerPt {
    const rect = canvas.getBoundingClientRect();
    return { x: e.clientX - rect.left, y: e.clientY - rect.top };
  }

  private onPointerDown(p: PointerPt): void {
    const tool = this.doc.activeTool;
    if (tool === "contour" || tool === "boundary") {
      this.capture.begin(p);
    } else if (tool === "dip") {
      const vp = this.view.viewport();
      this.dip.begin({ x: vp.toMap(p)[0], y: vp.toMap(p)[1] });
    }
  }

  private onPointerMove(p: PointerPt): void {
    if (this.capture.isActive) {
      this.capture.move(p);
      this.view.render(this.capture.points);
    } else if (this.dip.current) {
      const m = this.view.viewport().toMap(p);
      this.dip.dragStrike({ x: m[0], y: m[1] });
    }
  }

  private async onPointerUp(): Promise<void> {
    const tool = this.doc.activeTool;
    if (tool === "contour" || tool === "boundary") {
      const stroke = this.capture.finish();
      if (!stroke) {
        this.view.render();
        return; // single click: no element
      }
      const vp = this.view.viewport();
      const points = stroke.map((p) => vp.toMap(p));
      try {
        if (tool === "contour") {
          const elevation = this.prompts.elevation();
          if (elevation !== null) this.doc.addContour(points, elevation);
        } else {
          const meta = this.prompts.boundaryMeta(this.doc);
          if (meta) this.doc.addBoundary(points, meta.horizon, meta.older, meta.younger);
        }
        this.afterEdit();
      } catch (err) {
        this.toast(err instanceof Error ? err.message : String(err));
        this.view.render();
      }
    } else if (tool === "dip" && this.dip.current) {
      const angle = this.prompts.dipAngle();
      if (angle === null) {
        this.dip.cancel();
        return;
      }
      const rejected = this.dip.setDip(angle);
      if (rejected) {
        this.toast(rejected);
        this.dip.cancel();
        return;
      }
      const draft = this.dip.finish();
      const horizon = this.prompts.dipHorizon(this.doc);
      if (draft && horizon) {
        try {
          this.doc.addDip([draft.position.x, draft.position.y], draft.strikeAzimuthDeg, draft.dipDeg!, horizon);
          this.afterEdit();
        } catch (err) {
          this.toast(err instanceof Error ? err.message : String(err));
        }
      }
    }
  }

  private afterEdit(): void {
    this.doc.highlightedUnits = new Set();
    this.view.render();
    if (this.autoBuild) {
      if (this.buildTimer !== null) window.clearTimeout(this.buildTimer);
      this.buildTimer = window.setTimeout(() => void this.requestBuild(), AUTO_BUILD_DEBOUNCE_MS);
    }
  }

  async requestBuild(): Promise<BuildOutcome> {
    const outcome = await this.client.build(this.doc.toJson(), { grid: [96, 96] });
    this.applyBuildOutcome(outcome);
    return outcome;
  }

  /** Exposed for tests: updates highlights/toasts/viewer from an outcome. */
  applyBuildOutcome(outcome: BuildOutcome): void {
    switch (outcome.kind) {
      case "ok":
        this.doc.highlightedUnits = new Set();
        void this.viewer
          .showModel(outcome.objText, this.doc.sketch)
          .then((n) => this.toast(`model built: ${n} surfaces`));
        break;
      case "geology": {
        this.doc.highlightedUnits = highlightedUnits(outcome);
        this.toast(`${outcome.body.error.kind}: ${outcome.body.error.message}`);
        break;
      }
      case "schema":
        this.toast(`rejected: ${outcome.body.error.message}`);
        break;
      case "network":
        this.toast(`backend unreachable (${outcome.message}); retry when it is up`);
        break;
      case "stale":
        break; // a newer build superseded this one
    }
    this.view.render();
  }

  private saveToFile(): void {
    const blob = new Blob([JSON.stringify(this.doc.toJson(), null, 2)], { type: "application/json" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "sketch.json";
    a.click();
    URL.revokeObjectURL(a.href);
  }

  private async loadFromFile(input: HTMLInputElement): Promise<void> {
    const file = input.files?.[0];
    if (!file) return;
    try {
      this.doc.loadSketch(JSON.parse(await file.text()) as SketchJson);
      this.afterEdit();
    } catch (err) {
      this.toast(`could not load sketch: ${err instanceof Error ? err.message : String(err)}`);
    }
  }

  private toast(message: string): void {
    this.toastEl.textContent = message;
    this.toastEl.classList.add("visible");
    window.setTimeout(() => this.toastEl.classList.remove("visible"), 4000);
  }
}
