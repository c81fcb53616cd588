"""JSON request endpoint serving the companion diagram-studio UI.

A single POST endpoint ``/api`` accepts ``{"op": ..., "config": {...}}``
and returns ``{"ok": true, "result": ...}`` or ``{"ok": false, "errors":
[{"code", "message"}]}``. Requests are stateless and independent; GET
serves the built UI when a directory is provided.

Operations: ``validate``, ``equations`` (optional ``format``), ``evolve``,
``sweep`` (optional ``workers``), ``codegen`` (``mode``).
"""
from __future__ import annotations

import json
from functools import partial
from http import HTTPStatus
from http.server import SimpleHTTPRequestHandler, ThreadingHTTPServer

from .config import ConfigDocument, ConfigError
from .levels import validate
from .ops import InvalidDiagram, run_codegen, run_equations, run_evolve, run_sweep


def handle_request(payload: dict) -> dict:
    """Dispatch one API request; always returns a JSON-serializable dict."""
    op = payload.get("op")
    if op not in ("validate", "equations", "evolve", "sweep", "codegen"):
        return _err("bad_op", f"unknown op {op!r}")
    try:
        doc = ConfigDocument.from_dict(payload.get("config") or {})
    except ConfigError as exc:
        return _err("bad_config", str(exc))

    if op == "validate":
        report = validate(doc.diagram)
        return {"ok": True, "result": {
            "valid": report.ok,
            "violations": [{"code": v.code, "message": v.message}
                           for v in report.violations]}}
    try:
        if op == "equations":
            text, count = run_equations(doc, payload.get("format", "plain"))
            return {"ok": True, "result": {"text": text, "count": count}}
        if op == "evolve":
            res = run_evolve(doc)
            slots = [s for _, s in res.columns]
            return {"ok": True, "result": {
                "times_s": res.trajectory.times.tolist(),
                "columns": [name for name, _ in res.columns],
                "data": res.trajectory.states[:, slots].T.tolist(),
                "trace_error": res.trace_error}}
        if op == "sweep":
            res = run_sweep(doc, workers=int(payload.get("workers", 1)))
            slots = [s for _, s in res.columns]
            return {"ok": True, "result": {
                "detunings_mhz": res.spectrum.detunings_mhz.tolist(),
                "columns": [name for name, _ in res.columns],
                "data": res.spectrum.final_states[:, slots].T.tolist(),
                "trace_error": res.trace_error}}
        src = run_codegen(doc, payload.get("mode", "temporal"))
        return {"ok": True, "result": {"source": src.text, "manifest": src.manifest}}
    except InvalidDiagram as exc:
        return {"ok": False, "errors": [{"code": v.code, "message": v.message}
                                        for v in exc.report.violations]}
    except (ConfigError, ValueError, KeyError) as exc:
        return _err("bad_request", str(exc))


def _err(code: str, message: str) -> dict:
    return {"ok": False, "errors": [{"code": code, "message": message}]}


class _Handler(SimpleHTTPRequestHandler):
    def __init__(self, *args, ui_dir: str | None = None, **kwargs):
        self._ui_dir = ui_dir
        super().__init__(*args, directory=ui_dir or ".", **kwargs)

    def log_message(self, fmt, *args):  # keep test output quiet
        pass

    def do_POST(self):
        if self.path.rstrip("/") != "/api":
            self.send_error(HTTPStatus.NOT_FOUND)
            return
        length = int(self.headers.get("Content-Length", 0))
        try:
            payload = json.loads(self.rfile.read(length) or b"{}")
        except json.JSONDecodeError:
            payload = None
        if not isinstance(payload, dict):
            body = _err("bad_json", "request body must be a JSON object")
        else:
            body = handle_request(payload)
        data = json.dumps(body).encode()
        self.send_response(HTTPStatus.OK)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(data)))
        self.end_headers()
        self.wfile.write(data)

    def do_GET(self):
        if self._ui_dir is None:
            data = b"blochtk endpoint: POST JSON to /api\n"
            self.send_response(HTTPStatus.OK)
            self.send_header("Content-Type", "text/plain")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)
            return
        super().do_GET()


def make_server(port: int, ui_dir: str | None = None) -> ThreadingHTTPServer:
    handler = partial(_Handler, ui_dir=ui_dir)
    return ThreadingHTTPServer(("127.0.0.1", port), handler)


def serve(port: int, ui_dir: str | None = None) -> None:
    httpd = make_server(port, ui_dir)
    where = f"http://127.0.0.1:{port}/"
    print(f"serving on {where}" + (f" (UI from {ui_dir})" if ui_dir else ""))
    try:
        httpd.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        httpd.server_close()
