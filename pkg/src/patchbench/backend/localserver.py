"""In-process reference server for the wire protocol.

Serves any Backend (usually a stub) over HTTP. It exists so the remote
client and external workers can be tested against one authoritative
implementation of the endpoint shapes without a real model.
"""

from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..template.model import CompiledPrompt, template_from_json
from ..corpus.instances import RepairInstance
from .base import Backend, BackendError, ValidationError
from .params import GenerationParams, RepairJob, TuneParams


class ProtocolServer:
    def __init__(self, backend: Backend, host: str = "127.0.0.1", port: int = 0):
        self.backend = backend
        handler = _make_handler(backend)
        self.httpd = ThreadingHTTPServer((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def url(self) -> str:
        host, port = self.httpd.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "ProtocolServer":
        self._thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        self.httpd.shutdown()
        self.httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)


def _make_handler(backend: Backend):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args) -> None:  # quiet
            pass

        def _send(self, status: int, payload: dict) -> None:
            body = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _read_json(self) -> dict:
            length = int(self.headers.get("Content-Length", "0"))
            raw = self.rfile.read(length)
            return json.loads(raw)

        def do_GET(self) -> None:
            if self.path == "/v1/health":
                self._send(200, backend.health())
                return
            if self.path.startswith("/v1/jobs/"):
                job_id = self.path[len("/v1/jobs/") :]
                try:
                    job = backend.poll(job_id)
                except BackendError as exc:
                    self._send(404, {"error": str(exc)})
                    return
                payload = {
                    "status": job.status,
                    "steps_done": job.steps_done,
                    "loss_curve": job.loss_curve,
                }
                if job.checkpoint_ref:
                    payload["checkpoint_ref"] = job.checkpoint_ref
                if job.failure_reason:
                    payload["reason"] = job.failure_reason
                self._send(200, payload)
                return
            self._send(404, {"error": f"no such endpoint {self.path}"})

        def do_POST(self) -> None:
            try:
                payload = self._read_json()
            except (ValueError, json.JSONDecodeError):
                self._send(400, {"error": "request body is not valid JSON"})
                return
            if self.path == "/v1/generate":
                self._generate(payload)
                return
            if self.path == "/v1/tune":
                self._tune(payload)
                return
            self._send(404, {"error": f"no such endpoint {self.path}"})

        def _generate(self, payload: dict) -> None:
            if "prompts" not in payload or not isinstance(payload["prompts"], list):
                self._send(400, {"error": "generate request needs a prompts list"})
                return
            try:
                prompts = [CompiledPrompt.from_wire(p) for p in payload["prompts"]]
                params = GenerationParams.from_wire(payload.get("params", {}))
            except (KeyError, TypeError, ValueError) as exc:
                self._send(400, {"error": f"malformed generate request: {exc}"})
                return
            results = backend.generate(prompts, params)
            self._send(200, {"results": [r.to_wire() for r in results]})

        def _tune(self, payload: dict) -> None:
            try:
                mode = payload["mode"]
                if mode not in ("fine_tune", "prompt_tune"):
                    raise ValueError(f"unknown mode {mode!r}")
                job = RepairJob(
                    job_id="",
                    mode=mode,
                    model_id=payload.get("model_id", "default"),
                    tune_params=TuneParams.from_wire(payload.get("tune_params", {})),
                    templates=[template_from_json(t) for t in payload.get("templates", [])],
                    train=[RepairInstance.from_dict(r) for r in payload.get("train", [])],
                    val=[RepairInstance.from_dict(r) for r in payload.get("val", [])],
                )
                job.tune_params = TuneParams.from_wire({**payload.get("tune_params", {}), "mode": mode})
            except (KeyError, TypeError, ValueError) as exc:
                self._send(400, {"error": f"malformed tune request: {exc}"})
                return
            try:
                job_id = backend.submit_tune(job)
            except ValidationError as exc:
                self._send(400, {"error": str(exc)})
                return
            self._send(200, {"job_id": job_id})

    return Handler
