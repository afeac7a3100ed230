"""The backend interface: anything that can tune and generate."""

from __future__ import annotations

from abc import ABC, abstractmethod

from ..template.model import CompiledPrompt
from .params import GenerationParams, GenerationResult, RepairJob

PROTOCOL_HEADER = "X-Patchbench-Proto"
PROTOCOL_VERSION = "1"


class BackendError(RuntimeError):
    pass


class TransportError(BackendError):
    def __init__(self, message: str, attempts: int = 1, retryable: bool = True):
        super().__init__(message)
        self.attempts = attempts
        self.retryable = retryable


class ValidationError(BackendError):
    pass


class Backend(ABC):
    """Shareable handle; generate/submit/poll are safe from many threads."""

    @abstractmethod
    def generate(
        self, prompts: list[CompiledPrompt], params: GenerationParams
    ) -> list[GenerationResult]:
        """One result per prompt, order-aligned; per-item failures are
        error entries, not exceptions."""

    @abstractmethod
    def submit_tune(self, job: RepairJob) -> str:
        ...

    @abstractmethod
    def poll(self, job_id: str) -> RepairJob:
        ...

    @abstractmethod
    def health(self) -> dict:
        ...


def validate_job(job: RepairJob) -> None:
    if job.mode not in ("fine_tune", "prompt_tune"):
        raise ValidationError(f"unknown tune mode {job.mode!r}")
    if job.mode == "prompt_tune" and not job.templates:
        raise ValidationError("prompt_tune jobs need at least one template")
    if not job.train:
        raise ValidationError("tune job has an empty training manifest")
    ids = set()
    for inst in list(job.train) + list(job.val):
        if inst.id in ids:
            raise ValidationError(f"duplicate instance id {inst.id!r} in tune manifests")
        ids.add(inst.id)
