"""Cross-language integration: the Python client driving the TypeScript
worker over the wire protocol. Skipped unless the worker is built
(worker/dist/main.js) and node is available."""

from __future__ import annotations

import json
import shutil
import socket
import subprocess
import time
from pathlib import Path

import pytest
import requests

from patchbench.backend import GenerationParams, RemoteBackend, RepairJob, TuneParams
from patchbench.corpus import RepairInstance, SamplingPlan
from patchbench.harness import ExperimentSpec, run_experiment
from patchbench.template import get_builtin, instantiate

WORKER_MAIN = Path(__file__).parent.parent / "worker" / "dist" / "main.js"

pytestmark = pytest.mark.skipif(
    shutil.which("node") is None or not WORKER_MAIN.exists(),
    reason="TypeScript worker is not built",
)


def _free_port() -> int:
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


@pytest.fixture(scope="module")
def worker_url():
    port = _free_port()
    proc = subprocess.Popen(
        ["node", str(WORKER_MAIN), "--port", str(port)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.DEVNULL,
    )
    url = f"http://127.0.0.1:{port}"
    try:
        for _ in range(100):
            try:
                if requests.get(f"{url}/v1/health", timeout=1).ok:
                    break
            except requests.ConnectionError:
                time.sleep(0.1)
        else:
            pytest.fail("worker did not come up")
        yield url
    finally:
        proc.terminate()
        proc.wait(timeout=10)


def _instances(n: int) -> list[RepairInstance]:
    return [
        RepairInstance(f"w{k}", "java", f"x = y - {k} ;", f"x = y + {k} ;")
        for k in range(n)
    ]


def test_health_and_generate_determinism(worker_url):
    backend = RemoteBackend(worker_url)
    health = backend.health()
    assert health["ok"] is True and health["model_ids"]

    prompts = [instantiate(get_builtin("hbp2"), inst) for inst in _instances(3)]
    params = GenerationParams(beam_count=2, max_new_tokens=8)
    first = backend.generate(prompts, params)
    second = backend.generate(prompts, params)
    assert [r.instance_id for r in first] == ["w0", "w1", "w2"]
    assert [(r.text, r.error) for r in first] == [(r.text, r.error) for r in second]


def test_tune_lifecycle_and_checkpoint_generation(worker_url):
    backend = RemoteBackend(worker_url)
    instances = _instances(8)
    job = RepairJob(
        job_id="",
        mode="prompt_tune",
        model_id="default",
        tune_params=TuneParams(epochs=2, learning_rate=1e-2),
        templates=[get_builtin("sbp2_initialized", "generative")],
        train=instances[:6],
        val=instances[6:],
    )
    job_id = backend.submit_tune(job)
    finished = backend.poll_until_done(job_id, interval=0.3, timeout=300)
    assert finished.status == "done"
    assert finished.checkpoint_ref and finished.checkpoint_ref.startswith("ckpt-")
    assert finished.steps_done > 0
    assert len(finished.loss_curve) == 2
    # steps bounded by epochs * |train| as the job accounting promises
    assert finished.steps_done <= 2 * len(instances)

    tuned = RemoteBackend(worker_url, model_ref=finished.checkpoint_ref)
    prompts = [instantiate(get_builtin("sbp2_initialized", "generative"), inst) for inst in instances[:2]]
    results = tuned.generate(prompts, GenerationParams(beam_count=2, max_new_tokens=12))
    assert all(r.ok for r in results)


def test_end_to_end_experiment_against_worker(worker_url, tmp_path):
    records = [
        {"id": f"e{k}", "language": "java", "buggy": f"v = a - {k} ;", "fixed": f"v = a + {k} ;"}
        for k in range(12)
    ]
    ds = tmp_path / "ds.jsonl"
    ds.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    spec = ExperimentSpec(
        dataset_path=str(ds),
        out_dir=str(tmp_path / "out"),
        language="java",
        template_ids=("sbp2_initialized",),
        model_style="generative",
        backend=f"remote:{worker_url}",
        plan=SamplingPlan(mode="fraction", fraction=1.0, seeds=(1,)),
        tune=TuneParams(epochs=1, learning_rate=1e-2),
        generation=GenerationParams(beam_count=2, max_new_tokens=12),
    )
    result = run_experiment(spec)
    assert not result.failed_seeds
    assert "1" in result.per_seed
    assert (tmp_path / "out" / "result.json").exists()
