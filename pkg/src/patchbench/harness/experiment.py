"""End-to-end experiment runs: sample, tune, generate, evaluate, average.

Each seed runs independently and persists its own artifacts, so a
failed seed neither aborts the others nor loses their work; re-running
the same spec resumes from the completed seed states. With stub
backends the whole pipeline is deterministic and the result file is
byte-stable across repeats (wall-clock provenance lives in a sidecar).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..backend import (
    PROTOCOL_VERSION,
    Backend,
    BackendError,
    RemoteBackend,
    RepairJob,
    StubBackend,
    stub_backend,
)
from ..corpus import RepairInstance, load_dataset, sample_fraction, sample_shots, split_dataset
from ..corpus.sampling import seeded_shuffle
from ..metrics import aggregate, evaluate_pair
from ..template import PromptTemplate, builtin_catalog, instantiate, parse_template_file
from .spec import ExperimentSpec, SpecError

class ExperimentError(RuntimeError):
    pass

@dataclass
class ExperimentResult:
    label: str
    fingerprint: str
    seeds: list[int]
    per_seed: dict[str, dict] = field(default_factory=dict)
    cross_seed: dict[str, float] = field(default_factory=dict)
    metric_mode: str = "rate"
    plan_mode: str = "fraction"
    shot_count: int = 0
    test_manifest_digest: str = ""
    protocol_version: str = PROTOCOL_VERSION
    failed_seeds: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "fingerprint": self.fingerprint,
            "seeds": self.seeds,
            "per_seed": self.per_seed,
            "cross_seed": self.cross_seed,
            "metric_mode": self.metric_mode,
            "plan_mode": self.plan_mode,
            "shot_count": self.shot_count,
            "test_manifest_digest": self.test_manifest_digest,
            "protocol_version": self.protocol_version,
            "failed_seeds": self.failed_seeds,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentResult":
        return cls(**payload)

def make_backend(config: str) -> Backend:
    """`stub:copy`, `stub:fixed=<text>`, `stub:table=<file>`, or `remote:<url>`."""
    if config == "stub:copy":
        return stub_backend("copy")
    if config.startswith("stub:fixed="):
        return stub_backend("fixed_text", text=config.split("=", 1)[1])
    if config.startswith("stub:table="):
        table_path = config.split("=", 1)[1]
        table = json.loads(Path(table_path).read_text(encoding="utf-8"))
        return stub_backend("oracle_table", table=table)
    if config.startswith("remote:"):
        return RemoteBackend(config.split(":", 1)[1])
    raise SpecError(f"unknown backend config {config!r}")

def resolve_templates(spec: ExperimentSpec) -> list[PromptTemplate]:
    catalog = builtin_catalog(spec.model_style)
    if spec.template_file:
        for t in parse_template_file(Path(spec.template_file).read_text(encoding="utf-8")):
            catalog[t.id] = t
    missing = [tid for tid in spec.template_ids if tid not in catalog]
    if missing:
        raise SpecError(f"unknown template ids: {', '.join(missing)}")
    return [catalog[tid] for tid in spec.template_ids]

def run_experiment(spec: ExperimentSpec, backend: Backend | None = None) -> ExperimentResult:
    backend = backend or make_backend(spec.backend)
    templates = resolve_templates(spec)
    generation_template = templates[0]
    instances = load_dataset(spec.dataset_path, spec.dataset_schema)
    by_id = {inst.id: inst for inst in instances}
    ids = [inst.id for inst in instances]

    if spec.plan.mode == "shots":
        needed = spec.plan.shot_count + (spec.plan.fixed_test_size or 0)
        if len(ids) < needed:
            raise SpecError(
                f"dataset has {len(ids)} instances; shots mode needs at least {needed}"
            )

    out = Path(spec.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = ExperimentResult(
        label=spec.display_label(),
        fingerprint=spec.fingerprint(),
        seeds=list(spec.plan.seeds),
        metric_mode=spec.metric_mode,
        plan_mode=spec.plan.mode,
        shot_count=spec.plan.shot_count,
    )

    test_digests: list[str] = []
    for seed in spec.plan.seeds:
        seed_file = out / f"seed_{seed}.json"
        try:
            state = _load_seed_state(seed_file, result.fingerprint)
            if state is None:
                state = _run_seed(spec, seed, ids, by_id, backend, templates, generation_template, out)
                seed_file.write_text(json.dumps(state, sort_keys=True, indent=2) + "\n", encoding="utf-8")
            result.per_seed[str(seed)] = state["summary"]
            test_digests.append(state["test_digest"])
        except (BackendError, ExperimentError, OSError) as exc:
            result.failed_seeds[str(seed)] = str(exc)

    done = [result.per_seed[k] for k in sorted(result.per_seed, key=int)]
    if done:
        n = len(done)
        result.cross_seed = {
            key: sum(s[key] for s in done) / n for key in ("em", "sc", "codebleu")
        }
    result.test_manifest_digest = _digest(test_digests)

    _write_json(out / "result.json", result.to_dict())
    _write_json(
        out / "runinfo.json",
        {"finished_at": datetime.now(timezone.utc).isoformat(), "backend": spec.backend},
        sort=False,
    )
    if result.failed_seeds and not result.per_seed:
        raise ExperimentError(f"all seeds failed: {result.failed_seeds}")
    return result

def _run_seed(
    spec: ExperimentSpec,
    seed: int,
    ids: list[str],
    by_id: dict[str, RepairInstance],
    backend: Backend,
    templates: list[PromptTemplate],
    generation_template: PromptTemplate,
    out: Path,
) -> dict:
    plan = spec.plan
    if plan.mode == "shots":
        shuffled = seeded_shuffle(ids, seed)
        test_ids = shuffled[: plan.fixed_test_size]
        train_ids = sample_shots(ids, plan.shot_count, seed, reserved=set(test_ids))
        val_ids: list[str] = []
    else:
        pool = ids if plan.fraction >= 1.0 else sample_fraction(ids, plan.fraction, seed)
        split = split_dataset(pool, seed)
        train_ids, val_ids, test_ids = split.train, split.val, split.test

    overlap = set(train_ids) & set(test_ids)
    if overlap:
        raise ExperimentError(f"train/test overlap for seed {seed}: {sorted(overlap)[:5]}")

    manifest = {"seed": seed, "train": train_ids, "val": val_ids, "test": test_ids}
    _write_json(out / f"manifest_seed_{seed}.json", manifest)

    tune_summary = {"status": "skipped", "reason": "stub backend"}
    if not isinstance(backend, StubBackend):
        job = RepairJob(
            job_id="",
            mode=spec.tune.mode,
            model_id=spec.model_id,
            tune_params=spec.tune,
            templates=templates if spec.tune.mode == "prompt_tune" else [],
            train=_resolve(train_ids, by_id),
            val=_resolve(val_ids, by_id),
        )
        job_id = backend.submit_tune(job)
        finished = (
            backend.poll_until_done(job_id)
            if isinstance(backend, RemoteBackend)
            else backend.poll(job_id)
        )
        if finished.status != "done":
            raise ExperimentError(f"tune job {job_id} ended {finished.status}: {finished.failure_reason}")
        tune_summary = {
            "status": finished.status,
            "job_id": job_id,
            "steps_done": finished.steps_done,
            "checkpoint_ref": finished.checkpoint_ref,
        }

    test_instances = _resolve(test_ids, by_id)
    prompts = [instantiate(generation_template, inst) for inst in test_instances]
    results = backend.generate(prompts, spec.generation)
    predictions = {r.instance_id: (r.text if r.ok else "") for r in results}

    config = spec.codebleu_config()
    reports = [
        evaluate_pair(inst.id, predictions.get(inst.id, ""), inst.fixed_code, spec.language, config)
        for inst in test_instances
    ]
    with (out / f"predictions_seed_{seed}.jsonl").open("w", encoding="utf-8") as fh:
        for r in results:
            fh.write(json.dumps(r.to_wire(), sort_keys=True) + "\n")
    with (out / f"reports_seed_{seed}.jsonl").open("w", encoding="utf-8") as fh:
        for rep in reports:
            fh.write(json.dumps(rep.to_dict(), sort_keys=True) + "\n")

    summary = aggregate(reports, spec.metric_mode)
    return {
        "fingerprint": spec.fingerprint(),
        "seed": seed,
        "tune": tune_summary,
        "summary": summary,
        "test_digest": _digest(test_ids),
    }

def _resolve(ids: list[str], by_id: dict[str, RepairInstance]) -> list[RepairInstance]:
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise ExperimentError(f"manifest references unknown instance ids: {missing[:5]}")
    return [by_id[i] for i in ids]

def _load_seed_state(path: Path, fingerprint: str) -> dict | None:
    if not path.exists():
        return None
    state = json.loads(path.read_text(encoding="utf-8"))
    if state.get("fingerprint") != fingerprint:
        return None  # stale state from a different spec
    return state

def _digest(items) -> str:
    import hashlib

    blob = json.dumps(list(items), sort_keys=True).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()

def _write_json(path: Path, payload: dict, sort: bool = True) -> None:
    path.write_text(json.dumps(payload, sort_keys=sort, indent=2) + "\n", encoding="utf-8")
