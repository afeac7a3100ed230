"""HTTP client for a tuning worker speaking the patchbench protocol."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor

import requests

from ..template.model import CompiledPrompt
from .base import PROTOCOL_HEADER, PROTOCOL_VERSION, Backend, TransportError, validate_job
from .params import GenerationParams, GenerationResult, RepairJob, TuneParams


class RemoteBackend(Backend):
    """Talks JSON over HTTP; retries transport failures with backoff.

    Requests are capped at ``max_in_flight`` concurrent batches; batches
    of one generate call keep their order in the combined result.
    """

    def __init__(
        self,
        base_url: str,
        model_ref: str = "default",
        timeout: float = 120.0,
        max_attempts: int = 3,
        backoff: float = 0.5,
        batch_size: int = 16,
        max_in_flight: int = 4,
    ):
        self.base_url = base_url.rstrip("/")
        self.model_ref = model_ref
        self.timeout = timeout
        self.max_attempts = max_attempts
        self.backoff = backoff
        self.batch_size = batch_size
        self.max_in_flight = max_in_flight
        self._session = requests.Session()
        self._session.headers[PROTOCOL_HEADER] = PROTOCOL_VERSION

    # ------------------------------------------------------------------

    def _request(self, method: str, path: str, payload: dict | None = None) -> dict:
        url = self.base_url + path
        last_error: Exception | None = None
        for attempt in range(1, self.max_attempts + 1):
            try:
                resp = self._session.request(method, url, json=payload, timeout=self.timeout)
                if resp.status_code >= 500:
                    raise requests.ConnectionError(f"server error {resp.status_code}")
                if resp.status_code >= 400:
                    raise TransportError(
                        f"{method} {path} rejected: {resp.status_code} {resp.text[:200]}",
                        attempts=attempt,
                        retryable=False,
                    )
                return resp.json()
            except TransportError:
                raise
            except (requests.ConnectionError, requests.Timeout) as exc:
                last_error = exc
                if attempt < self.max_attempts:
                    time.sleep(self.backoff * (2 ** (attempt - 1)))
        raise TransportError(
            f"{method} {path} failed after {self.max_attempts} attempts: {last_error}",
            attempts=self.max_attempts,
        )

    # ------------------------------------------------------------------

    def generate(
        self, prompts: list[CompiledPrompt], params: GenerationParams
    ) -> list[GenerationResult]:
        if not prompts:
            return []
        batches = [prompts[i : i + self.batch_size] for i in range(0, len(prompts), self.batch_size)]

        def run(batch: list[CompiledPrompt]) -> list[GenerationResult]:
            payload = {
                "model_ref": self.model_ref,
                "params": params.to_wire(),
                "prompts": [p.to_wire() for p in batch],
            }
            body = self._request("POST", "/v1/generate", payload)
            results = []
            for entry in body.get("results", []):
                if "error" in entry:
                    results.append(GenerationResult(entry["instance_id"], error=entry["error"]))
                else:
                    results.append(GenerationResult(entry["instance_id"], text=entry.get("text", "")))
            return results

        if len(batches) == 1:
            return run(batches[0])
        with ThreadPoolExecutor(max_workers=self.max_in_flight) as pool:
            combined: list[GenerationResult] = []
            for chunk in pool.map(run, batches):
                combined.extend(chunk)
            return combined

    def submit_tune(self, job: RepairJob) -> str:
        from ..template.model import template_to_json

        validate_job(job)
        payload = {
            "mode": job.mode,
            "model_id": job.model_id,
            "tune_params": job.tune_params.to_wire(),
            "templates": [template_to_json(t) for t in job.templates],
            "train": [inst.to_dict() for inst in job.train],
            "val": [inst.to_dict() for inst in job.val],
        }
        body = self._request("POST", "/v1/tune", payload)
        job.job_id = body["job_id"]
        return job.job_id

    def poll(self, job_id: str) -> RepairJob:
        body = self._request("GET", f"/v1/jobs/{job_id}")
        job = RepairJob(job_id=job_id, mode="", model_id="", tune_params=TuneParams())
        job.status = body.get("status", "queued")
        job.steps_done = int(body.get("steps_done", 0))
        job.loss_curve = list(body.get("loss_curve", []))
        job.checkpoint_ref = body.get("checkpoint_ref")
        job.failure_reason = body.get("reason")
        return job

    def poll_until_done(self, job_id: str, interval: float = 1.0, timeout: float = 3600.0) -> RepairJob:
        deadline = time.monotonic() + timeout
        while True:
            job = self.poll(job_id)
            if job.status in ("done", "failed"):
                return job
            if time.monotonic() > deadline:
                raise TransportError(f"job {job_id} did not finish within {timeout}s")
            time.sleep(interval)

    def health(self) -> dict:
        return self._request("GET", "/v1/health")
