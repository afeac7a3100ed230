"""Experiment specification, config-file parsing, and fingerprinting."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..backend.params import GenerationParams, TuneParams
from ..corpus.sampling import SamplingPlan
from ..metrics.codebleu import CodeBleuConfig


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentSpec:
    dataset_path: str
    out_dir: str
    language: str = "java"
    dataset_schema: str = "canonical"
    template_ids: tuple[str, ...] = ("hbp1",)
    model_style: str = "infilling"
    template_file: str | None = None
    backend: str = "stub:copy"
    model_id: str = "default"
    plan: SamplingPlan = field(default_factory=lambda: SamplingPlan(mode="fraction", fraction=1.0))
    generation: GenerationParams = field(default_factory=GenerationParams)
    tune: TuneParams = field(default_factory=TuneParams)
    metric_mode: str = "rate"
    codebleu_weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    label: str = ""

    def __post_init__(self) -> None:
        if not self.template_ids:
            raise SpecError("at least one template id is required")
        if self.metric_mode not in ("rate", "count"):
            raise SpecError(f"metric mode must be rate or count, got {self.metric_mode!r}")
        if self.plan.mode == "shots" and self.plan.fixed_test_size is None:
            raise SpecError("shots-mode experiments need fixed_test_size")

    def codebleu_config(self) -> CodeBleuConfig:
        return CodeBleuConfig(weights=self.codebleu_weights)

    def fingerprint(self) -> str:
        payload = {
            "dataset_path": self.dataset_path,
            "dataset_schema": self.dataset_schema,
            "language": self.language,
            "template_ids": list(self.template_ids),
            "model_style": self.model_style,
            "backend": self.backend,
            "model_id": self.model_id,
            "plan": {
                "mode": self.plan.mode,
                "fraction": self.plan.fraction,
                "shot_count": self.plan.shot_count,
                "seeds": list(self.plan.seeds),
                "fixed_test_size": self.plan.fixed_test_size,
            },
            "generation": self.generation.to_wire(),
            "tune": self.tune.to_wire(),
            "metric_mode": self.metric_mode,
            "codebleu_weights": list(self.codebleu_weights),
        }
        blob = json.dumps(payload, sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()

    def display_label(self) -> str:
        return self.label or f"exp-{self.fingerprint()[:8]}"


_LIST_KEYS = {"templates", "seeds", "weights"}


def parse_config_text(text: str) -> dict:
    """`key = value` lines; '#' starts a comment; lists are comma-separated."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecError(f"config line {lineno}: expected key = value, got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key in _LIST_KEYS:
            values[key] = [v.strip() for v in value.split(",") if v.strip()]
        else:
            values[key] = value
    return values


def spec_from_config(text: str, overrides: dict | None = None) -> ExperimentSpec:
    raw = parse_config_text(text)
    raw.update(overrides or {})

    def need(key: str) -> str:
        if key not in raw:
            raise SpecError(f"config is missing required key {key!r}")
        return raw[key]

    plan_mode = raw.get("mode", "fraction")
    plan = SamplingPlan(
        mode=plan_mode,
        fraction=float(raw.get("fraction", 1.0)),
        shot_count=int(raw.get("shots", 0) or 0) if plan_mode == "shots" else 0,
        seeds=tuple(int(s) for s in raw.get("seeds", [1, 2, 3])),
        fixed_test_size=int(raw["fixed_test_size"]) if "fixed_test_size" in raw else None,
    )
    generation = GenerationParams(
        beam_count=int(raw.get("beam_count", 5)),
        temperature=float(raw.get("temperature", 1.0)),
        sample=_parse_bool(raw.get("sample", "false")),
        top_p=float(raw.get("top_p", 0.9)),
        repetition_penalty=float(raw.get("repetition_penalty", 1.0)),
        max_new_tokens=int(raw.get("max_new_tokens", 512)),
    )
    tune = TuneParams(
        optimizer=raw.get("optimizer", "adamw"),
        epsilon=float(raw.get("adam_epsilon", 1e-8)),
        learning_rate=float(raw.get("learning_rate", 5e-5)),
        scheduler=raw.get("scheduler", "linear"),
        epochs=int(raw.get("epochs", 10)),
        mode=raw.get("tune_mode", "prompt_tune"),
    )
    weights = raw.get("weights")
    return ExperimentSpec(
        dataset_path=need("dataset"),
        out_dir=need("out"),
        language=raw.get("language", "java"),
        dataset_schema=raw.get("schema", "canonical"),
        template_ids=tuple(raw.get("templates", ["hbp1"])),
        model_style=raw.get("style", "infilling"),
        template_file=raw.get("template_file"),
        backend=raw.get("backend", "stub:copy"),
        model_id=raw.get("model_id", "default"),
        plan=plan,
        generation=generation,
        tune=tune,
        metric_mode=raw.get("metric_mode", "rate"),
        codebleu_weights=tuple(float(w) for w in weights) if weights else (0.25, 0.25, 0.25, 0.25),
        label=raw.get("label", ""),
    )


def load_spec(path: str | Path, overrides: dict | None = None) -> ExperimentSpec:
    return spec_from_config(Path(path).read_text(encoding="utf-8"), overrides)


def with_overrides(spec: ExperimentSpec, **kwargs) -> ExperimentSpec:
    return replace(spec, **kwargs)


def _parse_bool(value: str) -> bool:
    if isinstance(value, bool):
        return value
    if value.lower() in ("true", "yes", "1"):
        return True
    if value.lower() in ("false", "no", "0"):
        return False
    raise SpecError(f"expected a boolean, got {value!r}")
