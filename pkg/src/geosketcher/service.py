"""Stateless HTTP service exposing validate and build to scripts and the sketch UI.

Endpoints (JSON in, JSON out unless OBJ is negotiated):
  GET  /v1/health    -> {"status": "ok"}
  POST /v1/validate  -> diagnostics plus age order or cycle (always 200 if the
                        sketch parses; validation findings are data, not errors)
  POST /v1/build     -> build result with base64 artifacts, or raw OBJ bytes
                        when the request sends Accept: model/obj

Transport and schema failures are 400, oversize bodies 413, geology failures
(cycle, singular system, ...) 422 with structured detail.
"""
from __future__ import annotations

import base64
import json
import os
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from .errors import DanglingReferenceError, GeosketcherError, SchemaError, SketchSyntaxError
from .pipeline import (
    BuildRequest,
    BuildResult,
    cycle_json,
    diagnostics_json,
    report_json,
    run_build,
)
from .sketch import Severity, parse_sketch, validate_sketch
from .stratigraphy import CycleDiagnostic, build_graph, relative_ages

DEFAULT_PORT = 7878
PORT_ENV_VAR = "GEOSKETCHER_PORT"
MAX_REQUEST_BYTES = 16 * 1024 * 1024
REQUEST_TIMEOUT_S = 30.0


def default_port() -> int:
    raw = os.environ.get(PORT_ENV_VAR)
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_PORT


class _RequestError(Exception):
    def __init__(self, status: int, kind: str, message: str, detail: dict | None = None):
        super().__init__(message)
        self.status = status
        self.kind = kind
        self.detail = detail or {}


def _parse_sketch_or_400(raw: bytes | dict):
    try:
        if isinstance(raw, dict):
            return parse_sketch(json.dumps(raw).encode("utf-8"))
        return parse_sketch(raw)
    except SketchSyntaxError as e:
        raise _RequestError(400, "syntax", str(e), {"byte_offset": e.byte_offset}) from e
    except SchemaError as e:
        raise _RequestError(400, "schema", str(e), {"path": e.path}) from e
    except DanglingReferenceError as e:
        raise _RequestError(400, "reference", str(e), {"id": e.ref_id, "path": e.path}) from e


def handle_validate(body: bytes) -> dict:
    sketch = _parse_sketch_or_400(body)
    diagnostics = validate_sketch(sketch)
    ages = relative_ages(build_graph(sketch))
    response: dict = {
        "diagnostics": diagnostics_json(diagnostics),
        "ok": all(d.severity is not Severity.ERROR for d in diagnostics),
    }
    if isinstance(ages, CycleDiagnostic):
        response["cycle"] = cycle_json(ages)
        response["ok"] = False
    else:
        response["age_order"] = list(ages.units_oldest_first)
    return response


def _build_request_from_json(body: bytes) -> BuildRequest:
    try:
        payload = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise _RequestError(400, "syntax", f"request body is not valid JSON: {e}") from e
    if not isinstance(payload, dict) or "sketch" not in payload:
        raise _RequestError(400, "request", 'build request must be an object with a "sketch" field')
    unknown = set(payload) - {"sketch", "grid", "spacing", "model_base"}
    if unknown:
        raise _RequestError(400, "request", f"unknown request field(s): {', '.join(sorted(unknown))}")
    sketch = _parse_sketch_or_400(payload["sketch"])
    grid = payload.get("grid", [128, 128])
    if (
        not isinstance(grid, (list, tuple))
        or len(grid) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in grid)
    ):
        raise _RequestError(400, "request", "grid must be [nx, ny] with integer axes")
    spacing = payload.get("spacing")
    model_base = payload.get("model_base")
    for name, v in (("spacing", spacing), ("model_base", model_base)):
        if v is not None and (isinstance(v, bool) or not isinstance(v, (int, float))):
            raise _RequestError(400, "request", f"{name} must be a number")
    try:
        return BuildRequest(
            sketch=sketch,
            grid=(grid[0], grid[1]),
            spacing=float(spacing) if spacing is not None else None,
            model_base=float(model_base) if model_base is not None else None,
        )
    except ValueError as e:
        raise _RequestError(400, "request", str(e)) from e


def handle_build(body: bytes) -> tuple[BuildRequest, BuildResult]:
    request = _build_request_from_json(body)
    result = run_build(request)
    if not result.ok:
        raise _RequestError(
            422,
            result.error.kind,
            result.error.message,
            {**result.error.detail, "diagnostics": diagnostics_json(result.diagnostics)},
        )
    return request, result


def build_response_json(result: BuildResult, grid: tuple[int, int]) -> dict:
    response = report_json(result, grid)
    response["artifacts"] = {
        name: {"bytes": len(blob), "content_base64": base64.b64encode(blob).decode("ascii")}
        for name, blob in sorted(result.artifacts.items())
    }
    return response


class _Handler(BaseHTTPRequestHandler):
    server_version = "geosketcher"
    protocol_version = "HTTP/1.1"
    timeout = REQUEST_TIMEOUT_S

    def log_message(self, fmt: str, *args) -> None:  # quiet by default
        if os.environ.get("GEOSKETCHER_LOG"):
            super().log_message(fmt, *args)

    def _send(self, status: int, payload: bytes, content_type: str) -> None:
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(payload)))
        self.end_headers()
        self.wfile.write(payload)

    def _send_json(self, status: int, obj: dict) -> None:
        self._send(status, json.dumps(obj, sort_keys=True).encode("utf-8"), "application/json")

    def _send_error_json(self, e: _RequestError) -> None:
        # the request body may not have been consumed; do not reuse the connection
        self.close_connection = True
        self._send_json(e.status, {"error": {"kind": e.kind, "message": str(e), "detail": e.detail}})

    def _read_body(self) -> bytes:
        length = self.headers.get("Content-Length")
        if length is None:
            raise _RequestError(400, "request", "missing Content-Length")
        n = int(length)
        if n > MAX_REQUEST_BYTES:
            raise _RequestError(413, "too_large", f"request body exceeds {MAX_REQUEST_BYTES} bytes")
        return self.rfile.read(n)

    def do_GET(self) -> None:
        if self.path == "/v1/health":
            self._send_json(200, {"status": "ok"})
        else:
            self._send_json(404, {"error": {"kind": "not_found", "message": self.path, "detail": {}}})

    def do_POST(self) -> None:
        try:
            body = self._read_body()
            if self.path == "/v1/validate":
                self._send_json(200, handle_validate(body))
            elif self.path == "/v1/build":
                wants_obj = "model/obj" in (self.headers.get("Accept") or "")
                request, result = handle_build(body)
                if wants_obj:
                    self._send(200, result.artifacts["model.obj"], "model/obj")
                else:
                    self._send_json(200, build_response_json(result, request.grid))
            else:
                self._send_json(404, {"error": {"kind": "not_found", "message": self.path, "detail": {}}})
        except _RequestError as e:
            self._send_error_json(e)
        except GeosketcherError as e:
            self._send_error_json(_RequestError(422, "geology_error", str(e)))
        except Exception as e:  # pragma: no cover - defensive
            self._send_error_json(_RequestError(500, "internal", f"{type(e).__name__}: {e}"))


def make_server(port: int = 0) -> ThreadingHTTPServer:
    """Bind a threaded server; port 0 picks an ephemeral port (server.server_port)."""
    server = ThreadingHTTPServer(("127.0.0.1", port), _Handler)
    server.daemon_threads = True
    return server


def serve(port: int | None = None) -> None:
    """Run the service until interrupted."""
    server = make_server(default_port() if port is None else port)
    print(f"geosketcher service listening on http://127.0.0.1:{server.server_port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def start_background(port: int = 0) -> tuple[ThreadingHTTPServer, threading.Thread]:
    """Start the service on a daemon thread; used by tests and embedders."""
    server = make_server(port)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, thread
