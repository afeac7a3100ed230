"""Deterministic stub backends for fully offline runs and tests."""

from __future__ import annotations

import itertools
import threading

from ..template.model import CompiledPrompt
from .base import Backend, BackendError, validate_job
from .params import GenerationParams, GenerationResult, RepairJob

STUB_MODES = ("copy", "oracle_table", "fixed_text")


class StubBackend(Backend):
    def __init__(self, mode: str, table: dict[str, str] | None = None, text: str = ""):
        if mode not in STUB_MODES:
            raise BackendError(f"unknown stub mode {mode!r}")
        if mode == "oracle_table" and table is None:
            raise BackendError("oracle_table mode requires a prediction table")
        self.mode = mode
        self.table = dict(table or {})
        self.text = text
        self._jobs: dict[str, RepairJob] = {}
        self._counter = itertools.count(1)
        self._lock = threading.Lock()

    def generate(
        self, prompts: list[CompiledPrompt], params: GenerationParams
    ) -> list[GenerationResult]:
        out = []
        for prompt in prompts:
            if self.mode == "copy":
                out.append(GenerationResult(prompt.instance_id, text=prompt.input_text))
            elif self.mode == "fixed_text":
                out.append(GenerationResult(prompt.instance_id, text=self.text))
            elif prompt.instance_id in self.table:
                out.append(GenerationResult(prompt.instance_id, text=self.table[prompt.instance_id]))
            else:
                out.append(GenerationResult(prompt.instance_id, error="no oracle entry"))
        return out

    def submit_tune(self, job: RepairJob) -> str:
        validate_job(job)
        with self._lock:
            job.job_id = job.job_id or f"stub-job-{next(self._counter)}"
            job.advance("running")
            job.advance("done")  # stub tuning is a no-op that finishes instantly
            job.checkpoint_ref = "stub:noop"
            self._jobs[job.job_id] = job
        return job.job_id

    def poll(self, job_id: str) -> RepairJob:
        with self._lock:
            if job_id not in self._jobs:
                raise BackendError(f"unknown job id {job_id!r}")
            return self._jobs[job_id]

    def health(self) -> dict:
        return {"ok": True, "model_ids": [f"stub:{self.mode}"]}


def stub_backend(mode: str = "copy", table: dict[str, str] | None = None, text: str = "") -> StubBackend:
    return StubBackend(mode, table=table, text=text)
