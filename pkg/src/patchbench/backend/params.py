"""Generation and tuning configuration, plus the job record."""

from __future__ import annotations

from dataclasses import dataclass, field

TUNE_MODES = ("fine_tune", "prompt_tune")
JOB_STATUSES = ("queued", "running", "done", "failed")


class ParamError(ValueError):
    pass


@dataclass(frozen=True)
class GenerationParams:
    beam_count: int = 5
    temperature: float = 1.0
    sample: bool = False
    top_p: float = 0.9
    repetition_penalty: float = 1.0
    max_new_tokens: int = 512

    def __post_init__(self) -> None:
        if self.beam_count < 1:
            raise ParamError("beam_count must be >= 1")
        if not (0 < self.top_p <= 1):
            raise ParamError("top_p must be in (0, 1]")
        if self.temperature <= 0:
            raise ParamError("temperature must be > 0")

    def to_wire(self) -> dict:
        return {
            "beam_count": self.beam_count,
            "temperature": self.temperature,
            "sample": self.sample,
            "top_p": self.top_p,
            "repetition_penalty": self.repetition_penalty,
            "max_new_tokens": self.max_new_tokens,
        }

    @classmethod
    def from_wire(cls, payload: dict) -> "GenerationParams":
        return cls(**{k: payload[k] for k in cls().to_wire() if k in payload})


@dataclass(frozen=True)
class TuneParams:
    optimizer: str = "adamw"
    epsilon: float = 1e-8
    learning_rate: float = 5e-5
    scheduler: str = "linear"
    epochs: int = 10
    mode: str = "prompt_tune"

    def __post_init__(self) -> None:
        if self.learning_rate <= 0:
            raise ParamError("learning_rate must be > 0")
        if self.epochs < 1:
            raise ParamError("epochs must be >= 1")
        if self.mode not in TUNE_MODES:
            raise ParamError(f"mode must be one of {TUNE_MODES}, got {self.mode!r}")

    def to_wire(self) -> dict:
        return {
            "optimizer": self.optimizer,
            "epsilon": self.epsilon,
            "learning_rate": self.learning_rate,
            "scheduler": self.scheduler,
            "epochs": self.epochs,
            "mode": self.mode,
        }

    @classmethod
    def from_wire(cls, payload: dict) -> "TuneParams":
        return cls(**{k: payload[k] for k in cls().to_wire() if k in payload})


@dataclass
class RepairJob:
    job_id: str
    mode: str
    model_id: str
    tune_params: TuneParams
    templates: list = field(default_factory=list)  # PromptTemplate values
    train: list = field(default_factory=list)  # RepairInstance values
    val: list = field(default_factory=list)
    status: str = "queued"
    steps_done: int = 0
    loss_curve: list[float] = field(default_factory=list)
    checkpoint_ref: str | None = None
    failure_reason: str | None = None

    def advance(self, status: str) -> None:
        order = {s: i for i, s in enumerate(JOB_STATUSES)}
        if status not in order:
            raise ParamError(f"unknown job status {status!r}")
        if order[status] < order[self.status]:
            raise ParamError(f"job status may only move forward ({self.status} -> {status})")
        self.status = status


@dataclass(frozen=True)
class GenerationResult:
    instance_id: str
    text: str | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None

    def to_wire(self) -> dict:
        if self.error is not None:
            return {"instance_id": self.instance_id, "error": self.error}
        return {"instance_id": self.instance_id, "text": self.text}
