/** HTTP client for the modeling service, with last-write-wins build requests.
 *
 * Only one build is in flight at a time: starting a new one aborts the
 * previous request, and responses that arrive for superseded requests are
 * reported as stale so the UI never renders an old model over a newer one.
 */
import { SketchJson } from "./schema.js";

export interface DiagnosticJson {
  severity: "ERROR" | "WARNING";
  message: string;
  path: string;
}

export interface CycleJson {
  units: string[];
  edges: { younger: string; older: string; kind: string; provenance: string }[];
}

export interface ValidateResponse {
  ok: boolean;
  diagnostics: DiagnosticJson[];
  age_order?: string[];
  cycle?: CycleJson;
}

export interface ArtifactJson {
  bytes: number;
  content_base64: string;
}

export interface BuildResponse {
  status: string;
  age_order: string[];
  diagnostics: DiagnosticJson[];
  timings_ms: Record<string, number>;
  artifacts: Record<string, ArtifactJson>;
}

export interface ErrorBody {
  error: { kind: string; message: string; detail: Record<string, unknown> };
}

export type BuildOutcome =
  | { kind: "ok"; response: BuildResponse; objText: string }
  | { kind: "geology"; status: number; body: ErrorBody }
  | { kind: "schema"; status: number; body: ErrorBody }
  | { kind: "network"; message: string }
  | { kind: "stale" };

export interface BuildOptions {
  grid?: [number, number];
  spacing?: number;
  modelBase?: number;
}

export function decodeBase64(data: string): Uint8Array {
  if (typeof atob === "function") {
    const bin = atob(data);
    const out = new Uint8Array(bin.length);
    for (let i = 0; i < bin.length; i++) out[i] = bin.charCodeAt(i);
    return out;
  }
  // Node without atob (test environments)
  const BufferCtor = (globalThis as { Buffer?: { from(s: string, e: string): Uint8Array } }).Buffer;
  if (!BufferCtor) throw new Error("no base64 decoder available");
  return Uint8Array.from(BufferCtor.from(data, "base64"));
}

export class GeosketcherClient {
  readonly baseUrl: string;
  private inflight: AbortController | null = null;
  private generation = 0;

  constructor(baseUrl: string) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
  }

  async health(): Promise<boolean> {
    try {
      const r = await fetch(`${this.baseUrl}/v1/health`);
      return r.ok;
    } catch {
      return false;
    }
  }

  async validate(sketch: SketchJson): Promise<ValidateResponse | ErrorBody> {
    const r = await fetch(`${this.baseUrl}/v1/validate`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(sketch),
    });
    return (await r.json()) as ValidateResponse | ErrorBody;
  }

  /** Build the sketch; a newer call supersedes this one (outcome "stale"). */
  async build(sketch: SketchJson, options: BuildOptions = {}): Promise<BuildOutcome> {
    this.inflight?.abort();
    const controller = new AbortController();
    this.inflight = controller;
    const myGeneration = ++this.generation;

    const request: Record<string, unknown> = { sketch };
    if (options.grid) request.grid = options.grid;
    if (options.spacing !== undefined) request.spacing = options.spacing;
    if (options.modelBase !== undefined) request.model_base = options.modelBase;

    let response: Response;
    try {
      response = await fetch(`${this.baseUrl}/v1/build`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(request),
        signal: controller.signal,
      });
    } catch (err) {
      if (controller.signal.aborted || myGeneration !== this.generation) return { kind: "stale" };
      return { kind: "network", message: err instanceof Error ? err.message : String(err) };
    }
    const body = await response.json();
    if (myGeneration !== this.generation) return { kind: "stale" };

    if (response.ok) {
      const build = body as BuildResponse;
      const objBytes = decodeBase64(build.artifacts["model.obj"].content_base64);
      return { kind: "ok", response: build, objText: new TextDecoder().decode(objBytes) };
    }
    if (response.status === 422) return { kind: "geology", status: response.status, body: body as ErrorBody };
    return { kind: "schema", status: response.status, body: body as ErrorBody };
  }
}

/** Unit ids the editor should highlight for a failed build (cycle members). */
export function highlightedUnits(outcome: BuildOutcome): Set<string> {
  if (outcome.kind !== "geology") return new Set();
  const detail = outcome.body.error.detail as { units?: unknown };
  if (outcome.body.error.kind === "cycle" && Array.isArray(detail.units)) {
    return new Set(detail.units as string[]);
  }
  return new Set();
}
