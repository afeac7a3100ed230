from __future__ import annotations

import json
from importlib import resources

import pytest
import requests

from patchbench.backend import (
    PROTOCOL_HEADER,
    PROTOCOL_VERSION,
    BackendError,
    GenerationParams,
    ParamError,
    ProtocolServer,
    RemoteBackend,
    RepairJob,
    TransportError,
    TuneParams,
    ValidationError,
    stub_backend,
    validate_job,
)
from patchbench.corpus import RepairInstance
from patchbench.template import get_builtin, instantiate


def _instances(n: int) -> list[RepairInstance]:
    return [
        RepairInstance(f"i{k}", "java", f"int v = {k} - 1 ;", f"int v = {k} + 1 ;")
        for k in range(n)
    ]


def _prompts(instances):
    t = get_builtin("hbp2")
    return [instantiate(t, inst) for inst in instances]


@pytest.fixture()
def vectors():
    data = resources.files("patchbench.backend").joinpath("data/protocol_vectors.json").read_text()
    return json.loads(data)


class TestParams:
    def test_table_defaults(self):
        g = GenerationParams()
        assert (g.beam_count, g.temperature, g.sample, g.top_p, g.repetition_penalty) == (
            5, 1.0, False, 0.9, 1.0,
        )
        t = TuneParams()
        assert (t.optimizer, t.epsilon, t.learning_rate, t.scheduler, t.epochs) == (
            "adamw", 1e-8, 5e-5, "linear", 10,
        )

    def test_validation(self):
        with pytest.raises(ParamError):
            GenerationParams(beam_count=0)
        with pytest.raises(ParamError):
            GenerationParams(top_p=1.5)
        with pytest.raises(ParamError):
            GenerationParams(temperature=0)
        with pytest.raises(ParamError):
            TuneParams(learning_rate=0)
        with pytest.raises(ParamError):
            TuneParams(epochs=0)
        with pytest.raises(ParamError):
            TuneParams(mode="distill")

    def test_job_status_only_moves_forward(self):
        job = RepairJob(job_id="j", mode="fine_tune", model_id="m", tune_params=TuneParams())
        job.advance("running")
        job.advance("done")
        with pytest.raises(ParamError):
            job.advance("queued")


class TestStub:
    def test_copy_mode_returns_buggy_code(self):
        instances = _instances(3)
        results = stub_backend("copy").generate(_prompts(instances), GenerationParams())
        assert [r.text for r in results] == [inst.buggy_code for inst in instances]

    def test_fixed_text_mode(self):
        results = stub_backend("fixed_text", text="PASS").generate(
            _prompts(_instances(2)), GenerationParams()
        )
        assert [r.text for r in results] == ["PASS", "PASS"]

    def test_oracle_table_hits_and_misses(self):
        instances = _instances(2)
        backend = stub_backend("oracle_table", table={"i0": "patched"})
        results = backend.generate(_prompts(instances), GenerationParams())
        assert results[0].text == "patched" and results[0].ok
        assert results[1].error is not None and not results[1].ok

    def test_oracle_table_requires_table(self):
        with pytest.raises(BackendError):
            stub_backend("oracle_table")

    def test_order_and_cardinality_preserved(self):
        instances = _instances(20)
        results = stub_backend("copy").generate(_prompts(instances), GenerationParams())
        assert [r.instance_id for r in results] == [inst.id for inst in instances]

    def test_tune_completes_instantly(self):
        backend = stub_backend("copy")
        job = RepairJob(
            job_id="", mode="prompt_tune", model_id="m", tune_params=TuneParams(),
            templates=[get_builtin("sbp2_initialized")], train=_instances(4),
        )
        job_id = backend.submit_tune(job)
        polled = backend.poll(job_id)
        assert polled.status == "done" and polled.checkpoint_ref == "stub:noop"

    def test_fine_tune_accepts_empty_template_set(self):
        backend = stub_backend("copy")
        job = RepairJob(job_id="", mode="fine_tune", model_id="m", tune_params=TuneParams(mode="fine_tune"), train=_instances(2))
        assert backend.poll(backend.submit_tune(job)).status == "done"

    def test_job_validation(self):
        job = RepairJob(job_id="", mode="prompt_tune", model_id="m", tune_params=TuneParams())
        with pytest.raises(ValidationError):
            validate_job(job)  # no templates
        job2 = RepairJob(
            job_id="", mode="prompt_tune", model_id="m", tune_params=TuneParams(),
            templates=[get_builtin("hbp1")], train=[],
        )
        with pytest.raises(ValidationError):
            validate_job(job2)  # empty train manifest


@pytest.fixture()
def server():
    backend = stub_backend("copy")
    srv = ProtocolServer(backend).start()
    yield srv
    srv.stop()


class TestProtocolConformance:
    def test_health_vector(self, server, vectors):
        v = vectors["health"]
        resp = requests.get(server.url + v["path"], timeout=10)
        assert resp.status_code == v["expect_status"]
        body = resp.json()
        for key in v["expect_keys"]:
            assert key in body
        assert body["ok"] is True

    def test_generate_vector_order_and_determinism(self, server, vectors):
        v = vectors["generate"]
        headers = {PROTOCOL_HEADER: PROTOCOL_VERSION}
        r1 = requests.post(server.url + v["path"], json=v["request"], headers=headers, timeout=10)
        r2 = requests.post(server.url + v["path"], json=v["request"], headers=headers, timeout=10)
        assert r1.status_code == v["expect_status"]
        body = r1.json()
        assert len(body["results"]) == v["expect"]["results_length"]
        assert [r["instance_id"] for r in body["results"]] == v["expect"]["order"]
        for entry in body["results"]:
            assert "text" in entry or "error" in entry
        assert r1.content == r2.content  # sample=false determinism

    def test_tune_vector_lifecycle(self, server, vectors):
        v = vectors["tune"]
        resp = requests.post(server.url + v["path"], json=v["request"], timeout=10)
        assert resp.status_code == v["expect_status"]
        job_id = resp.json()["job_id"]
        poll = vectors["tune"]["poll"]
        path = poll["path_template"].replace("{job_id}", job_id)
        body = requests.get(server.url + path, timeout=10).json()
        for key in poll["expect_keys"]:
            assert key in body
        assert body["status"] in poll["terminal_statuses"]
        if body["status"] == "done":
            for key in poll["done_requires"]:
                assert key in body

    def test_malformed_vectors_are_4xx(self, server, vectors):
        for case in vectors["malformed"]:
            resp = requests.post(server.url + case["path"], json=case["request"], timeout=10)
            assert resp.status_code == case["expect_status"], case["name"]
            assert "error" in resp.json()

    def test_unknown_job_is_404(self, server):
        resp = requests.get(server.url + "/v1/jobs/nope", timeout=10)
        assert resp.status_code == 404


class TestRemoteBackend:
    def test_generate_round_trip(self, server):
        remote = RemoteBackend(server.url)
        instances = _instances(40)
        results = remote.generate(_prompts(instances), GenerationParams())
        assert [r.instance_id for r in results] == [inst.id for inst in instances]
        assert [r.text for r in results] == [inst.buggy_code for inst in instances]

    def test_batching_preserves_order(self, server):
        remote = RemoteBackend(server.url, batch_size=4, max_in_flight=3)
        instances = _instances(30)
        results = remote.generate(_prompts(instances), GenerationParams())
        assert [r.instance_id for r in results] == [inst.id for inst in instances]

    def test_tune_and_poll(self, server):
        remote = RemoteBackend(server.url)
        job = RepairJob(
            job_id="", mode="prompt_tune", model_id="m", tune_params=TuneParams(),
            templates=[get_builtin("sbp2_initialized")], train=_instances(3),
        )
        job_id = remote.submit_tune(job)
        finished = remote.poll_until_done(job_id, interval=0.01, timeout=10)
        assert finished.status == "done"

    def test_unreachable_worker_raises_transport_error(self):
        remote = RemoteBackend("http://127.0.0.1:9", max_attempts=2, backoff=0.01, timeout=0.2)
        with pytest.raises(TransportError) as err:
            remote.health()
        assert err.value.attempts == 2

    def test_rejected_request_is_not_retried(self, server):
        remote = RemoteBackend(server.url)
        job = RepairJob(job_id="", mode="prompt_tune", model_id="m", tune_params=TuneParams(),
                        templates=[get_builtin("hbp1")], train=_instances(1))
        # strip the templates after validation to force a server-side 400
        payload_job = RepairJob(job_id="", mode="fine_tune", model_id="m",
                                tune_params=TuneParams(mode="fine_tune"), train=[])
        with pytest.raises(BackendError):
            remote.submit_tune(payload_job)
